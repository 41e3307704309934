//! Frame indices `∞, 0, 1, 1̄` of the Θ-frame and index words.

use crate::error::{Error, Result};

/// Θ-frame index encoded as `0..4`.
pub type Ix = usize;

pub const INF: Ix = 0;
pub const ZERO: Ix = 1;
pub const ONE: Ix = 2;
pub const BAR: Ix = 3;

pub const ALL: [Ix; 4] = [INF, ZERO, ONE, BAR];

/// Complex conjugation of an index: swaps `1` and `1̄`.
pub fn conj(i: Ix) -> Ix {
    match i {
        ONE => BAR,
        BAR => ONE,
        other => other,
    }
}

pub fn index_char(i: Ix) -> char {
    ['i', '0', '1', 'b'][i]
}

pub fn parse_index(c: char) -> Result<Ix> {
    match c {
        'i' | '∞' => Ok(INF),
        '0' => Ok(ZERO),
        '1' => Ok(ONE),
        'b' => Ok(BAR),
        other => Err(Error::Parse(format!("bad Θ-frame index `{other}` (expected i, 0, 1 or b)"))),
    }
}

/// Word text such as `"i01b"`.
pub fn word_string(w: &[Ix]) -> String {
    w.iter().map(|&i| index_char(i)).collect()
}

pub fn parse_word(s: &str) -> Result<Vec<Ix>> {
    s.chars().map(parse_index).collect()
}

/// Flat position of a word in a dense rank-`w.len()` array.
pub fn encode(w: &[Ix]) -> usize {
    w.iter().fold(0, |acc, &i| 4 * acc + i)
}

/// Word of flat position `code` for the given rank.
pub fn decode(mut code: usize, rank: usize) -> Vec<Ix> {
    let mut w = vec![0; rank];
    for s in (0..rank).rev() {
        w[s] = code % 4;
        code /= 4;
    }
    w
}

pub fn conj_word(w: &[Ix]) -> Vec<Ix> {
    w.iter().map(|&i| conj(i)).collect()
}

/// Flat position of the conjugate word.
pub fn conj_code(code: usize, rank: usize) -> usize {
    encode(&conj_word(&decode(code, rank)))
}

/// Whether the word is the stored representative of its conjugation orbit:
/// its first complex index (if any) is `1`.
pub fn is_canonical(w: &[Ix]) -> bool {
    w.iter().find(|&&i| i == ONE || i == BAR).is_none_or(|&i| i == ONE)
}

/// Contribution of a lower index to the weight `#` of the radial derivative:
/// each slot counts 1, and a `0` index counts one more.
pub fn radial_weight(i: Ix) -> i64 {
    if i == ZERO {
        2
    } else {
        1
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #[test]
        fn encode_decode_round_trip(code in 0usize..256) {
            prop_assert_eq!(encode(&decode(code, 4)), code);
            prop_assert_eq!(conj_code(conj_code(code, 4), 4), code);
        }

        #[test]
        fn exactly_one_orbit_member_is_canonical(code in 0usize..256) {
            let w = decode(code, 4);
            let c = conj_word(&w);
            if w == c {
                prop_assert!(is_canonical(&w));
            } else {
                prop_assert!(is_canonical(&w) ^ is_canonical(&c));
            }
        }
    }

    #[test]
    fn words_parse() {
        assert_eq!(parse_word("i01b").unwrap(), vec![INF, ZERO, ONE, BAR]);
        assert_eq!(word_string(&[BAR, ONE]), "b1");
        assert!(parse_word("x").is_err());
    }
}

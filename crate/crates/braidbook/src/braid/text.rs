//! Text formats: `n=4; 3:4 -1:3 2:4` for band words, `n=3; 1 -2` for Artin words.

use std::fmt;
use std::str::FromStr;

use super::{ArtinWord, BandLetter, BandWord};
use crate::error::{Error, Result};

/// Splits off an optional `n=<int>;` header.
pub(crate) fn split_header(s: &str) -> Result<(Option<usize>, &str)> {
    let s = s.trim();
    let Some(rest) = s.strip_prefix("n=") else {
        return Ok((None, s));
    };
    let (num, body) = rest
        .split_once(';')
        .ok_or_else(|| Error::Parse("header `n=<int>` must end with `;`".into()))?;
    let n = num
        .trim()
        .parse::<usize>()
        .map_err(|_| Error::Parse(format!("bad strand count `{}`", num.trim())))?;
    if n == 0 {
        return Err(Error::Parse("strand count must be positive".into()));
    }
    Ok((Some(n), body))
}

fn parse_letter(tok: &str) -> Result<BandLetter> {
    let (sign, body) = match tok.strip_prefix('-') {
        Some(b) => (-1, b),
        None => (1, tok.strip_prefix('+').unwrap_or(tok)),
    };
    let (a, b) = body
        .split_once(':')
        .ok_or_else(|| Error::Parse(format!("token `{tok}` is not of the form [-]i:j")))?;
    let a: usize = a
        .parse()
        .map_err(|_| Error::Parse(format!("bad index in `{tok}`")))?;
    let b: usize = b
        .parse()
        .map_err(|_| Error::Parse(format!("bad index in `{tok}`")))?;
    BandLetter::new(a, b, sign).map_err(|e| Error::Parse(format!("`{tok}`: {e}")))
}

impl FromStr for BandWord {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (n, body) = split_header(s)?;
        let letters = body
            .split_whitespace()
            .map(parse_letter)
            .collect::<Result<Vec<_>>>()?;
        let max = letters.iter().map(|l| l.j).max().unwrap_or(1);
        let n = n.unwrap_or(max);
        if max > n {
            return Err(Error::Parse(format!("index {max} exceeds n={n}")));
        }
        Ok(BandWord { n, letters })
    }
}

impl fmt::Display for BandWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n={};", self.n)?;
        for l in &self.letters {
            write!(f, " {l}")?;
        }
        Ok(())
    }
}

impl FromStr for ArtinWord {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (n, body) = split_header(s)?;
        let n = n.ok_or_else(|| Error::Parse("Artin words need an `n=<int>;` header".into()))?;
        let letters = body
            .split_whitespace()
            .map(|t| {
                t.parse::<i32>()
                    .map_err(|_| Error::Parse(format!("bad Artin generator `{t}`")))
            })
            .collect::<Result<Vec<_>>>()?;
        ArtinWord::new(n, letters).map_err(|e| Error::Parse(e.to_string()))
    }
}

impl fmt::Display for ArtinWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n={};", self.n)?;
        for k in &self.letters {
            write!(f, " {k}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn band_round_trip() {
        let w: BandWord = "n=4; 3:4 -1:3 -2:3 2:4 3:4".parse().unwrap();
        assert_eq!(w.len(), 5);
        assert_eq!(w.letters[1], BandLetter::neg(1, 3));
        assert_eq!(w.to_string(), "n=4; 3:4 -1:3 -2:3 2:4 3:4");
        let v: BandWord = "4:2".parse().unwrap();
        assert_eq!((v.n, v.letters[0]), (4, BandLetter::pos(2, 4)));
    }

    #[test]
    fn band_errors() {
        assert!("n=3; 1:4".parse::<BandWord>().is_err());
        assert!("n=3; 1:1".parse::<BandWord>().is_err());
        assert!("n=3 1:2".parse::<BandWord>().is_err());
        assert!("n=3; 1-2".parse::<BandWord>().is_err());
        assert!("n=0;".parse::<BandWord>().is_err());
    }

    #[test]
    fn artin_parse() {
        let a: ArtinWord = "n=3; 1 -2".parse().unwrap();
        assert_eq!(a.letters, vec![1, -2]);
        assert!("1 -2".parse::<ArtinWord>().is_err());
        assert!("n=3; 3".parse::<ArtinWord>().is_err());
        assert!("n=3; 0".parse::<ArtinWord>().is_err());
    }
}

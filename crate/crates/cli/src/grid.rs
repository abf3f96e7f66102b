//! Parameter grids: comma-separated values, where an item `a..b` expands to
//! the integers `a` through `b` inclusive.

use std::str::FromStr;

/// Largest number of values a grid may expand to.
pub const MAX_GRID_LEN: usize = 10_000;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid grid {text:?}: {msg}")]
pub struct GridError {
    pub text: String,
    pub msg: String,
}

pub fn parse_grid<T: FromStr>(text: &str) -> Result<Vec<T>, GridError> {
    let fail = |msg: String| GridError {
        text: text.to_string(),
        msg,
    };
    let mut out = Vec::new();
    for item in text.split(',') {
        let item = item.trim();
        if item.is_empty() {
            return Err(fail("empty item".into()));
        }
        let push = |tok: &str, out: &mut Vec<T>| -> Result<(), GridError> {
            if out.len() >= MAX_GRID_LEN {
                return Err(fail(format!("more than {MAX_GRID_LEN} values")));
            }
            let v = tok
                .parse()
                .map_err(|_| fail(format!("cannot parse {tok:?}")))?;
            out.push(v);
            Ok(())
        };
        match item.split_once("..") {
            Some((lo, hi)) => {
                let lo: i64 = lo
                    .trim()
                    .parse()
                    .map_err(|_| fail(format!("range start {lo:?} is not an integer")))?;
                let hi: i64 = hi
                    .trim()
                    .parse()
                    .map_err(|_| fail(format!("range end {hi:?} is not an integer")))?;
                if lo > hi {
                    return Err(fail(format!("range {lo}..{hi} is empty")));
                }
                if (hi - lo) as u64 >= MAX_GRID_LEN as u64 {
                    return Err(fail(format!("more than {MAX_GRID_LEN} values")));
                }
                for v in lo..=hi {
                    push(&v.to_string(), &mut out)?;
                }
            }
            None => push(item, &mut out)?,
        }
    }
    Ok(out)
}

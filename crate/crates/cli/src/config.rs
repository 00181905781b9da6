use std::path::Path;

use anyhow::{bail, Context, Result};
use trigseries::ConvexSequence;

/// Parse `a..bxk` (geometric, factor `k`), `a..b` (every integer) or a
/// comma-separated list.
pub fn parse_orders(text: &str) -> Result<Vec<usize>> {
    let text = text.trim();
    let orders = if let Some((lo, rest)) = text.split_once("..") {
        let lo: usize = lo.trim().parse().with_context(|| format!("bad range start in {text:?}"))?;
        let (hi, factor) = match rest.split_once('x') {
            Some((hi, f)) => (hi, Some(f)),
            None => (rest, None),
        };
        let hi: usize = hi.trim().parse().with_context(|| format!("bad range end in {text:?}"))?;
        if lo == 0 || lo > hi {
            bail!("range {text:?} must satisfy 1 ≤ start ≤ end");
        }
        match factor {
            Some(f) => {
                let f: usize = f.trim().parse().with_context(|| format!("bad factor in {text:?}"))?;
                if f < 2 {
                    bail!("geometric factor must be at least 2");
                }
                let mut out = vec![];
                let mut n = lo;
                while n <= hi {
                    out.push(n);
                    n *= f;
                }
                out
            }
            None => (lo..=hi).collect(),
        }
    } else {
        text.split(',')
            .map(|s| s.trim().parse::<usize>().with_context(|| format!("bad order {s:?}")))
            .collect::<Result<Vec<_>>>()?
    };
    if orders.is_empty() {
        bail!("no orders in {text:?}");
    }
    if orders.windows(2).any(|w| w[0] >= w[1]) {
        bail!("orders in {text:?} must be strictly increasing");
    }
    Ok(orders)
}

/// `log`, `log2` or a path to a sequence file.
pub fn load_sequence(text: &str) -> Result<ConvexSequence> {
    match text {
        "log" => Ok(ConvexSequence::log_reciprocal()),
        "log2" => Ok(ConvexSequence::log_squared_reciprocal()),
        path => ConvexSequence::from_file(Path::new(path))
            .with_context(|| format!("loading sequence from {path}")),
    }
}

pub fn parse_pair(text: &str) -> Result<(f64, f64)> {
    let (a, b) = text
        .split_once(',')
        .with_context(|| format!("expected \"lo,hi\", got {text:?}"))?;
    Ok((a.trim().parse()?, b.trim().parse()?))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn geometric_range() {
        assert_eq!(parse_orders("16..4096x2").unwrap().len(), 9);
        assert_eq!(parse_orders("64..2048x2").unwrap(), vec![64, 128, 256, 512, 1024, 2048]);
    }

    #[test]
    fn lists_and_plain_ranges() {
        assert_eq!(parse_orders("8,16, 32").unwrap(), vec![8, 16, 32]);
        assert_eq!(parse_orders("3..5").unwrap(), vec![3, 4, 5]);
        assert_eq!(parse_orders("7").unwrap(), vec![7]);
    }

    #[test]
    fn rejects_malformed_orders() {
        for bad in ["", "0..4", "8..4", "4..8x1", "8,4", "a,b", "4..8xq"] {
            assert!(parse_orders(bad).is_err(), "{bad}");
        }
    }
}

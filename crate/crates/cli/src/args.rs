//! Value parsers for the comma- and colon-separated flags.

use std::ops::RangeInclusive;
use std::path::PathBuf;
use std::str::FromStr;

fn split_list<T: FromStr>(s: &str, sep: char) -> Result<Vec<T>, String> {
    s.split(sep)
        .map(|p| p.trim().parse::<T>().map_err(|_| format!("cannot parse {p:?}")))
        .collect()
}

/// `A:B` with `2 <= A <= B`.
pub fn parse_degree_range(s: &str) -> Result<RangeInclusive<u32>, String> {
    let v: Vec<u32> = split_list(s, ':')?;
    match v.as_slice() {
        [a, b] if *a >= 2 && a <= b => Ok(*a..=*b),
        [_, _] => Err(format!("{s:?}: need 2 <= A <= B")),
        _ => Err(format!("{s:?}: expected A:B")),
    }
}

/// `kmin:kmax` with `kmin < kmax`.
pub fn parse_window(s: &str) -> Result<(f64, f64), String> {
    let v: Vec<f64> = split_list(s, ':')?;
    match v.as_slice() {
        [a, b] if a.is_finite() && b.is_finite() && a < b => Ok((*a, *b)),
        [_, _] => Err(format!("{s:?}: need finite kmin < kmax")),
        _ => Err(format!("{s:?}: expected kmin:kmax")),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum AnglesArg {
    Values(Vec<f64>),
    /// Use the optimum found by the optimizer (cached when possible).
    Best,
}

/// `g1,b1,g2,b2`, `g,b`, or `best`.
pub fn parse_angles(s: &str) -> Result<AnglesArg, String> {
    if s.eq_ignore_ascii_case("best") {
        return Ok(AnglesArg::Best);
    }
    let v: Vec<f64> = split_list(s, ',')?;
    if !(v.len() == 2 || v.len() == 4) || v.iter().any(|x| !x.is_finite()) {
        return Err(format!("{s:?}: expected 2 or 4 finite comma-separated radians, or \"best\""));
    }
    Ok(AnglesArg::Values(v))
}

/// `t1` or `t1,t2`.
pub fn parse_taus(s: &str) -> Result<Vec<u32>, String> {
    let v: Vec<u32> = split_list(s, ',')?;
    if v.is_empty() || v.len() > 2 {
        return Err(format!("{s:?}: expected t1 or t1,t2"));
    }
    Ok(v)
}

#[derive(Debug, Clone, PartialEq)]
pub enum GraphSpec {
    Cycle(usize),
    Heawood,
    File(PathBuf),
}

/// `cycle:N`, `heawood`, or `file:PATH`.
pub fn parse_graph(s: &str) -> Result<GraphSpec, String> {
    if s == "heawood" {
        return Ok(GraphSpec::Heawood);
    }
    if let Some(n) = s.strip_prefix("cycle:") {
        return n.parse().map(GraphSpec::Cycle).map_err(|_| format!("{s:?}: bad cycle length"));
    }
    if let Some(p) = s.strip_prefix("file:") {
        if p.is_empty() {
            return Err("file: needs a path".into());
        }
        return Ok(GraphSpec::File(PathBuf::from(p)));
    }
    Err(format!("{s:?}: expected cycle:N, heawood, or file:PATH"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges_and_windows() {
        assert_eq!(parse_degree_range("2:19").unwrap(), 2..=19);
        assert!(parse_degree_range("1:5").is_err());
        assert!(parse_degree_range("9:5").is_err());
        assert!(parse_degree_range("5").is_err());
        assert_eq!(parse_window("0.3:0.6").unwrap(), (0.3, 0.6));
        assert!(parse_window("0.6:0.3").is_err());
    }

    #[test]
    fn angles_taus_graphs() {
        assert_eq!(parse_angles("0,0,0,0").unwrap(), AnglesArg::Values(vec![0.0; 4]));
        assert_eq!(parse_angles("BEST").unwrap(), AnglesArg::Best);
        assert!(parse_angles("1,2,3").is_err());
        assert!(parse_angles("1,nan").is_err());
        assert_eq!(parse_taus("2,3").unwrap(), vec![2, 3]);
        assert!(parse_taus("1,2,3").is_err());
        assert!(parse_taus("-1").is_err());
        assert_eq!(parse_graph("cycle:8").unwrap(), GraphSpec::Cycle(8));
        assert_eq!(parse_graph("file:/x").unwrap(), GraphSpec::File("/x".into()));
        assert!(parse_graph("petersen").is_err());
    }
}

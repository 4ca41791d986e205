//! Text output: ranking TSV and `%g`-style number formatting.

use std::io::{BufRead, Write};

use crate::centrality::CentralityResult;
use crate::error::{Result, TwcError};
use crate::tempgraph::TemporalGraph;

/// Formats like C's `%.{digits}g`: shortest of fixed or scientific, trailing zeros trimmed.
pub fn format_sig(x: f64, digits: usize) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let digits = digits.max(1);
    let sci = format!("{:.*e}", digits - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -4 || exp >= digits as i32 {
        let mantissa = trim_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{mantissa}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{x:.decimals$}")).to_owned()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// Writes `rank<TAB>label<TAB>score` lines in ranking order.
pub fn write_ranking<W: Write>(out: &mut W, g: &TemporalGraph, result: &CentralityResult) -> Result<()> {
    for (rank, v, score) in result.ranked() {
        writeln!(out, "{rank}\t{}\t{}", g.label(v), format_sig(score, 12))?;
    }
    Ok(())
}

/// Reads a ranking TSV back into `(label, score)` pairs in file order.
pub fn read_ranking<R: BufRead>(source: R) -> Result<Vec<(String, f64)>> {
    let mut out = Vec::new();
    for (i, line) in source.lines().enumerate() {
        let line = line?;
        let trimmed = line.trim_end_matches(['\r', '\n']);
        if trimmed.trim().is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = trimmed.split('\t').collect();
        let parse_err = |message: String| TwcError::Parse { line: i + 1, message };
        if fields.len() != 3 {
            return Err(parse_err(format!("expected `rank<TAB>label<TAB>score`, found {} fields", fields.len())));
        }
        let score: f64 = fields[2]
            .parse()
            .map_err(|_| parse_err(format!("invalid score `{}`", fields[2])))?;
        out.push((fields[1].to_owned(), score));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sig_formatting() {
        assert_eq!(format_sig(10.0, 12), "10");
        assert_eq!(format_sig(0.0, 12), "0");
        assert_eq!(format_sig(0.5, 12), "0.5");
        assert_eq!(format_sig(1.0 / 3.0, 12), "0.333333333333");
        assert_eq!(format_sig(2.0 / 3.0, 12), "0.666666666667");
        assert_eq!(format_sig(123456789012345.0, 12), "1.23456789012e+14");
        assert_eq!(format_sig(1e-7, 12), "1e-07");
        assert_eq!(format_sig(-2.5e-5, 3), "-2.5e-05");
        assert_eq!(format_sig(0.0001, 12), "0.0001");
        assert_eq!(format_sig(999999999999.9, 12), "1e+12");
        assert_eq!(format_sig(f64::NAN, 12), "nan");
        assert_eq!(format_sig(-1.0, 12), "-1");
    }

    #[test]
    fn read_rejects_bad_rows() {
        assert!(read_ranking("1\ta\n".as_bytes()).is_err());
        assert!(read_ranking("1\ta\tx\n".as_bytes()).is_err());
        let rows = read_ranking("# c\n1\ta b\t2.5\n\n2\tc\t0\n".as_bytes()).unwrap();
        assert_eq!(rows, vec![("a b".to_owned(), 2.5), ("c".to_owned(), 0.0)]);
    }
}

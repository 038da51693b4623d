//! CSV readers and writers for arithmetic functions and integer tables.
//!
//! Arithmetic functions use rows `n,re,im` for `n = 1..=N` in order.
//! Integer tables are a header line plus rows of signed integers.

use std::io::{Read, Write};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::dirichlet::{ArithFn, Scalar};
use crate::error::{Error, Result};

fn parse_err(e: impl std::fmt::Display) -> Error {
    Error::Parse(e.to_string())
}

pub fn write_arith_fn_csv<T: Scalar, W: Write>(f: &ArithFn<T>, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["n", "re", "im"]).map_err(parse_err)?;
    for (i, v) in f.values().iter().enumerate() {
        let c = v.to_complex();
        w.write_record([(i + 1).to_string(), fmt_f64(c.re), fmt_f64(c.im)])
            .map_err(parse_err)?;
    }
    w.flush().map_err(parse_err)
}

/// Shortest representation that parses back to the same f64.
fn fmt_f64(x: f64) -> String {
    if x == 0.0 {
        "0".into()
    } else {
        format!("{x:?}")
    }
}

pub fn read_arith_fn_csv<R: Read>(input: R) -> Result<ArithFn<Complex64>> {
    let mut r = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(input);
    let headers = r.headers().map_err(parse_err)?.clone();
    if headers.iter().collect::<Vec<_>>() != ["n", "re", "im"] {
        return Err(Error::Parse(format!("expected header n,re,im, got {headers:?}")));
    }
    let mut values = Vec::new();
    for rec in r.records() {
        let rec = rec.map_err(parse_err)?;
        if rec.len() != 3 {
            return Err(Error::Parse(format!("expected 3 fields, got {}", rec.len())));
        }
        let n: usize = rec[0].parse().map_err(parse_err)?;
        if n != values.len() + 1 {
            return Err(Error::Parse(format!(
                "rows must list n = 1, 2, … in order; found n = {n} at row {}",
                values.len() + 1
            )));
        }
        let re: f64 = rec[1].parse().map_err(parse_err)?;
        let im: f64 = rec[2].parse().map_err(parse_err)?;
        values.push(Complex64::new(re, im));
    }
    ArithFn::from_values(values)
}

/// Exact integer view of a complex-valued function, if every value is a
/// real integer that fits.
pub fn to_integer_fn(f: &ArithFn<Complex64>) -> Option<ArithFn<i128>> {
    const EXACT: f64 = 9_007_199_254_740_992.0;
    let values = f
        .values()
        .iter()
        .map(|c| (c.im == 0.0 && c.re.fract() == 0.0 && c.re.abs() <= EXACT).then_some(c.re as i128))
        .collect::<Option<Vec<_>>>()?;
    ArithFn::from_values(values).ok()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntTable {
    pub headers: Vec<String>,
    pub rows: Vec<Vec<i128>>,
}

impl IntTable {
    pub fn column(&self, name: &str) -> Option<Vec<i128>> {
        let idx = self.headers.iter().position(|h| h == name)?;
        Some(self.rows.iter().map(|r| r[idx]).collect())
    }
}

pub fn write_int_table<W, I>(out: W, headers: &[&str], rows: I) -> Result<()>
where
    W: Write,
    I: IntoIterator<Item = Vec<i128>>,
{
    let mut w = csv::Writer::from_writer(out);
    w.write_record(headers).map_err(parse_err)?;
    for row in rows {
        if row.len() != headers.len() {
            return Err(Error::Parse(format!(
                "row has {} fields, header has {}",
                row.len(),
                headers.len()
            )));
        }
        w.write_record(row.iter().map(i128::to_string)).map_err(parse_err)?;
    }
    w.flush().map_err(parse_err)
}

pub fn read_int_table<R: Read>(input: R) -> Result<IntTable> {
    let mut r = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(input);
    let headers: Vec<String> = r.headers().map_err(parse_err)?.iter().map(String::from).collect();
    let mut rows = Vec::new();
    for rec in r.records() {
        let rec = rec.map_err(parse_err)?;
        let row = rec
            .iter()
            .map(|s| s.parse::<i128>().map_err(parse_err))
            .collect::<Result<Vec<_>>>()?;
        rows.push(row);
    }
    Ok(IntTable { headers, rows })
}

pub fn write_int_table_json<W: Write>(out: W, table: &IntTable) -> Result<()> {
    serde_json::to_writer(out, table).map_err(parse_err)
}

pub fn read_int_table_json<R: Read>(input: R) -> Result<IntTable> {
    let table: IntTable = serde_json::from_reader(input).map_err(parse_err)?;
    if let Some(bad) = table.rows.iter().find(|r| r.len() != table.headers.len()) {
        return Err(Error::Parse(format!(
            "row has {} fields, header has {}",
            bad.len(),
            table.headers.len()
        )));
    }
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arith_fn_round_trip() {
        let f = ArithFn::from_values(vec![
            Complex64::new(1.0, 0.0),
            Complex64::new(-0.1, 1e-300),
            Complex64::new(std::f64::consts::PI, -2.5),
        ])
        .unwrap();
        let mut buf = Vec::new();
        write_arith_fn_csv(&f, &mut buf).unwrap();
        assert!(buf.starts_with(b"n,re,im\n1,1.0,0\n"));
        assert_eq!(read_arith_fn_csv(&buf[..]).unwrap(), f);
    }

    #[test]
    fn integer_round_trip() {
        let f = ArithFn::<i128>::from_values(vec![1, -1, -1, 0, -1, 1]).unwrap();
        let mut buf = Vec::new();
        write_arith_fn_csv(&f, &mut buf).unwrap();
        let back = read_arith_fn_csv(&buf[..]).unwrap();
        assert_eq!(to_integer_fn(&back).unwrap(), f);
        let g = ArithFn::from_values(vec![Complex64::new(0.5, 0.0)]).unwrap();
        assert!(to_integer_fn(&g).is_none());
    }

    #[test]
    fn malformed_arith_fn() {
        assert!(read_arith_fn_csv(&b"n,re\n1,1\n"[..]).is_err());
        assert!(read_arith_fn_csv(&b"n,re,im\n2,1,0\n"[..]).is_err());
        assert!(read_arith_fn_csv(&b"n,re,im\n1,x,0\n"[..]).is_err());
        assert!(read_arith_fn_csv(&b"n,re,im\n"[..]).is_err());
    }

    #[test]
    fn int_table_round_trip() {
        let rows = vec![vec![1, 0], vec![2, -1], vec![3, i128::MAX]];
        let mut buf = Vec::new();
        write_int_table(&mut buf, &["n", "mu"], rows.clone()).unwrap();
        let t = read_int_table(&buf[..]).unwrap();
        assert_eq!(t.headers, ["n", "mu"]);
        assert_eq!(t.rows, rows);
        assert_eq!(t.column("mu").unwrap(), vec![0, -1, i128::MAX]);
        assert!(t.column("spf").is_none());
        assert!(write_int_table(Vec::new(), &["n"], vec![vec![1, 2]]).is_err());
        let mut json = Vec::new();
        write_int_table_json(&mut json, &t).unwrap();
        assert_eq!(read_int_table_json(&json[..]).unwrap(), t);
        assert!(read_int_table_json(&br#"{"headers":["n"],"rows":[[1,2]]}"#[..]).is_err());
    }
}

//! CSV emission. Numbers are written with 12 significant digits in the
//! shortest of fixed or exponent notation, like C's `%.12g`.

use std::io::{self, Write};

use crate::sweep::SweepTable;

pub const SIGNIFICANT_DIGITS: usize = 12;

pub fn format_sig(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let precision = SIGNIFICANT_DIGITS - 1;
    let sci = format!("{:.*e}", precision, x);
    let (mantissa, exponent) = sci.split_once('e').expect("exponent marker");
    let exponent: i32 = exponent.parse().expect("integer exponent");
    if exponent < -4 || exponent >= SIGNIFICANT_DIGITS as i32 {
        let sign = if exponent < 0 { '-' } else { '+' };
        format!("{}e{}{:02}", trim_zeros(mantissa), sign, exponent.abs())
    } else {
        let decimals = (precision as i32 - exponent).max(0) as usize;
        trim_zeros(&format!("{:.*}", decimals, x)).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

pub fn write_table<W: Write>(table: &SweepTable, mut out: W) -> io::Result<()> {
    let mut line = String::from("vary");
    for name in &table.header {
        line.push(',');
        line.push_str(name);
    }
    line.push('\n');
    out.write_all(line.as_bytes())?;
    for row in &table.rows {
        let mut line = format_sig(row.vary_value);
        for value in &row.values {
            line.push(',');
            line.push_str(&format_sig(*value));
        }
        line.push('\n');
        out.write_all(line.as_bytes())?;
    }
    out.flush()
}

pub fn to_string(table: &SweepTable) -> String {
    let mut buf = Vec::new();
    write_table(table, &mut buf).expect("writing to a Vec cannot fail");
    String::from_utf8(buf).expect("ASCII output")
}

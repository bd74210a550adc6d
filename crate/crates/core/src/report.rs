//! Deterministic report emission: JSON with sorted keys and every float
//! written with 17 significant digits, and CSV summaries.

use std::io;

use serde::Serialize;
use serde_json::ser::{Formatter, PrettyFormatter};

use crate::aut::AutReport;
use crate::deform::ScanRow;
use crate::error::Result;
use crate::quat::Quaternion;

struct CanonicalFormatter<'a>(PrettyFormatter<'a>);

impl Formatter for CanonicalFormatter<'_> {
    fn write_f64<W: ?Sized + io::Write>(&mut self, w: &mut W, v: f64) -> io::Result<()> {
        write!(w, "{v:.16e}")
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, w: &mut W, v: f32) -> io::Result<()> {
        self.write_f64(w, v as f64)
    }

    fn begin_array<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_array(w)
    }

    fn end_array<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array(w)
    }

    fn begin_array_value<W: ?Sized + io::Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_array_value(w, first)
    }

    fn end_array_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array_value(w)
    }

    fn begin_object<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object(w)
    }

    fn end_object<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object(w)
    }

    fn begin_object_key<W: ?Sized + io::Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_object_key(w, first)
    }

    fn begin_object_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object_value(w)
    }

    fn end_object_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object_value(w)
    }
}

/// Pretty JSON with sorted object keys and `{:.16e}` floats, newline-terminated.
pub fn to_canonical_json<T: Serialize + ?Sized>(value: &T) -> Result<String> {
    // serde_json's Value keeps objects in a BTreeMap, so keys come out sorted
    let value = serde_json::to_value(value)?;
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, CanonicalFormatter(PrettyFormatter::new()));
    value.serialize(&mut ser)?;
    out.push(b'\n');
    Ok(String::from_utf8(out).expect("serde_json writes UTF-8"))
}

/// `w,x,y,z` in shortest round-trip form.
pub fn quat_field(q: Quaternion) -> String {
    format!("{},{},{},{}", q.w, q.x, q.y, q.z)
}

/// Expected dimension set as `a|b`.
pub fn dims_field(dims: &[usize]) -> String {
    dims.iter().map(usize::to_string).collect::<Vec<_>>().join("|")
}

pub(crate) fn finish(w: csv::Writer<Vec<u8>>) -> Result<String> {
    let bytes = w.into_inner().map_err(|e| csv::Error::from(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv writes UTF-8"))
}

/// Columns: case, alpha, beta, lambda, p, nullity, expected, pass.
pub fn aut_csv(reports: &[AutReport]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["case", "alpha", "beta", "lambda", "p", "nullity", "expected", "pass"])?;
    for r in reports {
        w.write_record([
            r.case.clone(),
            quat_field(r.params.alpha),
            quat_field(r.params.beta),
            quat_field(r.params.lambda),
            r.params.p.to_string(),
            r.nullity.to_string(),
            dims_field(&r.expected),
            r.pass.to_string(),
        ])?;
    }
    finish(w)
}

/// Columns: lambda, case, nullity, expected, pass, slice_regular_family.
pub fn scan_csv(rows: &[ScanRow]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["lambda", "case", "nullity", "expected", "pass", "slice_regular_family"])?;
    for r in rows {
        w.write_record([
            quat_field(r.lambda),
            r.case.clone(),
            r.nullity.to_string(),
            dims_field(&r.expected),
            r.pass.to_string(),
            r.slice_regular_family.to_string(),
        ])?;
    }
    finish(w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashMap;

    #[test]
    fn sorted_keys_and_fixed_floats() {
        let mut m = HashMap::new();
        m.insert("zeta", vec![0.1, 2.0]);
        m.insert("alpha", vec![-0.0625]);
        let s = to_canonical_json(&m).unwrap();
        assert!(s.find("\"alpha\"").unwrap() < s.find("\"zeta\"").unwrap());
        assert!(s.contains("1.0000000000000001e-1"));
        assert!(s.contains("2.0000000000000000e0"));
        assert!(s.contains("-6.2500000000000000e-2"));
        let back: HashMap<String, Vec<f64>> = serde_json::from_str(&s).unwrap();
        assert_eq!(back["zeta"], vec![0.1, 2.0]);
        assert!(s.ends_with("}\n"));
    }

    #[test]
    fn quaternion_fields() {
        assert_eq!(quat_field(Quaternion::new(0.5, 0.0, -1.0, 0.25)), "0.5,0,-1,0.25");
        assert_eq!(dims_field(&[4, 8]), "4|8");
    }
}

//! JSON forms of matrices, channels, codes and symmetry generators, plus a
//! writer that prints every float with 17 significant digits.
//!
//! Matrix: `{"rows": r, "cols": c, "data": [...]}`, row-major, each entry a
//! number or `[re, im]`.
//!
//! Channel, one of:
//! - `{"kraus": [matrix, ...]}`
//! - `{"builtin": name, "params": {...}}` where name is `identity` (`d`),
//!   `dephasing` / `bit_flip` / `depolarizing` (`p`), `amplitude_damping`
//!   (`gamma`), or `single_site` (`site`, `n_qubits`, plus an `inner` builtin)
//! - `{"compose": [channel, ...]}`, applied first to last
//! - `{"isometry": matrix}`
//! - `{"covariant_isometry": {"H_L", "H_S", "assignment": [[a, b], ...], "lambda"}}`
//!
//! Symmetry: `{"H_L": matrix, "H_S": matrix}` for U(1),
//! `{"label": s, "pairs": [[G_L, G_S], ...]}` for a general product representation, or
//! `{"label": s, "d_L": a, "d_S": b, "generators": [matrix, ...]}` with generators on `L ⊗ S`.

use std::io::{self, Write};

use serde::Serialize;
use serde_json::ser::{Formatter, PrettyFormatter};
use serde_json::{Map, Value};

use crate::channel::{compose, Builtin, Isometry, KrausChannel};
use crate::covariance::{covariant_isometry, ProductRepBasis, U1Spec};
use crate::error::{Error, Result};
use crate::linalg::{c, ComplexMatrix, HermitianOperator};

fn err(path: &str, msg: impl std::fmt::Display) -> Error {
    Error::Json(format!("at `{path}`: {msg}"))
}

fn object<'a>(v: &'a Value, path: &str) -> Result<&'a Map<String, Value>> {
    v.as_object().ok_or_else(|| err(path, "expected an object"))
}

fn field<'a>(obj: &'a Map<String, Value>, key: &str, path: &str) -> Result<&'a Value> {
    obj.get(key)
        .ok_or_else(|| err(path, format!("missing field `{key}`")))
}

fn number(v: &Value, path: &str) -> Result<f64> {
    v.as_f64().ok_or_else(|| err(path, "expected a number"))
}

fn count(v: &Value, path: &str) -> Result<usize> {
    v.as_u64()
        .map(|u| u as usize)
        .ok_or_else(|| err(path, "expected a nonnegative integer"))
}

fn array<'a>(v: &'a Value, path: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| err(path, "expected an array"))
}

fn reject_unknown(obj: &Map<String, Value>, allowed: &[&str], path: &str) -> Result<()> {
    for key in obj.keys() {
        if !allowed.contains(&key.as_str()) {
            return Err(err(
                path,
                format!("unknown field `{key}` (expected one of {allowed:?})"),
            ));
        }
    }
    Ok(())
}

pub fn parse_matrix(v: &Value, path: &str) -> Result<ComplexMatrix> {
    let obj = object(v, path)?;
    reject_unknown(obj, &["rows", "cols", "data"], path)?;
    let rows = count(field(obj, "rows", path)?, &format!("{path}.rows"))?;
    let cols = count(field(obj, "cols", path)?, &format!("{path}.cols"))?;
    let data = array(field(obj, "data", path)?, &format!("{path}.data"))?;
    if data.len() != rows * cols {
        return Err(err(
            &format!("{path}.data"),
            format!(
                "expected {} entries for a {rows}x{cols} matrix, found {}",
                rows * cols,
                data.len()
            ),
        ));
    }
    let mut entries = Vec::with_capacity(data.len());
    for (k, e) in data.iter().enumerate() {
        let p = format!("{path}.data[{k}]");
        let z = match e {
            Value::Array(parts) if parts.len() == 2 => c(number(&parts[0], &p)?, number(&parts[1], &p)?),
            Value::Number(_) => c(number(e, &p)?, 0.0),
            _ => return Err(err(&p, "expected a number or [re, im]")),
        };
        if !(z.re.is_finite() && z.im.is_finite()) {
            return Err(err(&p, "entry is not finite"));
        }
        entries.push(z);
    }
    Ok(ComplexMatrix::from_row_slice(rows, cols, &entries))
}

pub fn parse_hermitian(v: &Value, path: &str) -> Result<HermitianOperator> {
    HermitianOperator::new(parse_matrix(v, path)?).map_err(|e| err(path, e))
}

fn parse_builtin(obj: &Map<String, Value>, path: &str) -> Result<Builtin> {
    reject_unknown(obj, &["builtin", "params", "inner"], path)?;
    let name = field(obj, "builtin", path)?
        .as_str()
        .ok_or_else(|| err(&format!("{path}.builtin"), "expected a string"))?;
    let empty = Map::new();
    let params = match obj.get("params") {
        Some(p) => object(p, &format!("{path}.params"))?,
        None => &empty,
    };
    for (k, v) in params {
        number(v, &format!("{path}.params.{k}"))?;
    }
    let lookup = |key: &str| params.get(key).and_then(Value::as_f64);
    if name == "single_site" {
        let site = count(
            field(params, "site", &format!("{path}.params"))?,
            &format!("{path}.params.site"),
        )?;
        let n_qubits = count(
            field(params, "n_qubits", &format!("{path}.params"))?,
            &format!("{path}.params.n_qubits"),
        )?;
        let inner_path = format!("{path}.inner");
        let inner = parse_builtin(object(field(obj, "inner", path)?, &inner_path)?, &inner_path)?;
        return Ok(Builtin::SingleSite {
            inner: Box::new(inner),
            site,
            n_qubits,
        });
    }
    if obj.contains_key("inner") {
        return Err(err(path, "`inner` is only valid for single_site"));
    }
    Builtin::from_name(name, &lookup).map_err(|e| err(path, e))
}

/// Parses any of the channel forms listed in the module docs.
pub fn parse_channel(v: &Value, path: &str) -> Result<KrausChannel> {
    let obj = object(v, path)?;
    if obj.contains_key("builtin") {
        return parse_builtin(obj, path)?.channel().map_err(|e| err(path, e));
    }
    if let Some(k) = obj.get("kraus") {
        reject_unknown(obj, &["kraus", "d_in", "d_out"], path)?;
        let list = array(k, &format!("{path}.kraus"))?;
        let kraus = list
            .iter()
            .enumerate()
            .map(|(i, m)| parse_matrix(m, &format!("{path}.kraus[{i}]")))
            .collect::<Result<Vec<_>>>()?;
        let channel = KrausChannel::new(kraus).map_err(|e| err(path, e))?;
        for (key, actual) in [("d_in", channel.d_in()), ("d_out", channel.d_out())] {
            if let Some(declared) = obj.get(key) {
                let declared = count(declared, &format!("{path}.{key}"))?;
                if declared != actual {
                    return Err(err(
                        path,
                        format!("{key} = {declared} but Kraus operators imply {actual}"),
                    ));
                }
            }
        }
        return Ok(channel);
    }
    if let Some(list) = obj.get("compose") {
        reject_unknown(obj, &["compose"], path)?;
        let list = array(list, &format!("{path}.compose"))?;
        let mut acc: Option<KrausChannel> = None;
        for (i, item) in list.iter().enumerate() {
            let p = format!("{path}.compose[{i}]");
            let next = parse_channel(item, &p)?;
            acc = Some(match acc {
                None => next,
                Some(prev) => compose(&next, &prev).map_err(|e| err(&p, e))?,
            });
        }
        return acc.ok_or_else(|| err(path, "compose list is empty"));
    }
    if obj.contains_key("isometry") || obj.contains_key("covariant_isometry") {
        return Ok(KrausChannel::from_isometry(&parse_isometry(v, path)?));
    }
    Err(err(
        path,
        "expected one of `kraus`, `builtin`, `compose`, `isometry`, `covariant_isometry`",
    ))
}

/// `{"isometry": matrix}` or `{"covariant_isometry": {...}}`.
pub fn parse_isometry(v: &Value, path: &str) -> Result<Isometry> {
    let obj = object(v, path)?;
    if let Some(m) = obj.get("isometry") {
        reject_unknown(obj, &["isometry"], path)?;
        let p = format!("{path}.isometry");
        return Isometry::new(parse_matrix(m, &p)?).map_err(|e| err(&p, e));
    }
    if let Some(spec) = obj.get("covariant_isometry") {
        reject_unknown(obj, &["covariant_isometry"], path)?;
        let p = format!("{path}.covariant_isometry");
        let spec = object(spec, &p)?;
        reject_unknown(spec, &["H_L", "H_S", "assignment", "lambda"], &p)?;
        let h_l = parse_hermitian(field(spec, "H_L", &p)?, &format!("{p}.H_L"))?;
        let h_s = parse_hermitian(field(spec, "H_S", &p)?, &format!("{p}.H_S"))?;
        let lambda = match spec.get("lambda") {
            Some(l) => number(l, &format!("{p}.lambda"))?,
            None => 0.0,
        };
        let ap = format!("{p}.assignment");
        let assignment = array(field(spec, "assignment", &p)?, &ap)?
            .iter()
            .enumerate()
            .map(|(i, pair)| {
                let pp = format!("{ap}[{i}]");
                match array(pair, &pp)?.as_slice() {
                    [a, b] => Ok((count(a, &pp)?, count(b, &pp)?)),
                    _ => Err(err(&pp, "expected [logical, physical]")),
                }
            })
            .collect::<Result<Vec<_>>>()?;
        return covariant_isometry(&h_l, &h_s, &assignment, lambda).map_err(|e| err(&p, e));
    }
    Err(err(path, "expected `isometry` or `covariant_isometry`"))
}

/// A symmetry description: U(1) or a general product representation.
#[derive(Debug, Clone)]
pub enum Symmetry {
    U1(U1Spec),
    Product(ProductRepBasis),
}

impl AsRef<ProductRepBasis> for Symmetry {
    fn as_ref(&self) -> &ProductRepBasis {
        match self {
            Symmetry::U1(s) => s.basis(),
            Symmetry::Product(b) => b,
        }
    }
}

pub fn parse_symmetry(v: &Value, path: &str) -> Result<Symmetry> {
    let obj = object(v, path)?;
    if obj.contains_key("H_L") || obj.contains_key("H_S") {
        reject_unknown(obj, &["H_L", "H_S"], path)?;
        let h_l = parse_hermitian(field(obj, "H_L", path)?, &format!("{path}.H_L"))?;
        let h_s = parse_hermitian(field(obj, "H_S", path)?, &format!("{path}.H_S"))?;
        return Ok(Symmetry::U1(U1Spec::new(h_l, h_s).map_err(|e| err(path, e))?));
    }
    let label = obj.get("label").and_then(Value::as_str).unwrap_or("generators");
    if let Some(gens) = obj.get("generators") {
        reject_unknown(obj, &["label", "generators", "d_L", "d_S"], path)?;
        let d_l = count(field(obj, "d_L", path)?, &format!("{path}.d_L"))?;
        let d_s = count(field(obj, "d_S", path)?, &format!("{path}.d_S"))?;
        let gp = format!("{path}.generators");
        let generators = array(gens, &gp)?
            .iter()
            .enumerate()
            .map(|(i, g)| parse_hermitian(g, &format!("{gp}[{i}]")))
            .collect::<Result<Vec<_>>>()?;
        let basis =
            ProductRepBasis::from_generators(label, d_l, d_s, generators).map_err(|e| err(path, e))?;
        return Ok(Symmetry::Product(basis));
    }
    reject_unknown(obj, &["label", "pairs"], path)?;
    let pp = format!("{path}.pairs");
    let pairs = array(field(obj, "pairs", path)?, &pp)?
        .iter()
        .enumerate()
        .map(|(i, pair)| {
            let p = format!("{pp}[{i}]");
            match array(pair, &p)?.as_slice() {
                [gl, gs] => Ok((
                    parse_hermitian(gl, &format!("{p}[0]"))?,
                    parse_hermitian(gs, &format!("{p}[1]"))?,
                )),
                _ => Err(err(&p, "expected [G_L, G_S]")),
            }
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Symmetry::Product(
        ProductRepBasis::new(label, pairs).map_err(|e| err(path, e))?,
    ))
}

/// Serializable view of a matrix in the input format, `[re, im]` entries.
pub struct MatrixJson<'a>(pub &'a ComplexMatrix);

impl Serialize for MatrixJson<'_> {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let m = self.0;
        let data: Vec<[f64; 2]> = (0..m.nrows())
            .flat_map(|r| (0..m.ncols()).map(move |col| [m[(r, col)].re, m[(r, col)].im]))
            .collect();
        let mut st = s.serialize_struct("Matrix", 3)?;
        st.serialize_field("rows", &m.nrows())?;
        st.serialize_field("cols", &m.ncols())?;
        st.serialize_field("data", &data)?;
        st.end()
    }
}

pub fn matrix_to_value(m: &ComplexMatrix) -> Value {
    serde_json::to_value(MatrixJson(m)).expect("matrix serializes")
}

/// Pretty JSON with floats printed as `{:.16e}` (17 significant digits).
/// Non-finite floats become `null`.
struct SigFigs<'a>(PrettyFormatter<'a>);

impl Formatter for SigFigs<'_> {
    fn write_f64<W: ?Sized + Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        if value == 0.0 {
            // Keeps -0.0 and 0.0 distinct while staying short.
            return write!(
                writer,
                "{}",
                if value.is_sign_negative() { "-0.0" } else { "0.0" }
            );
        }
        write!(writer, "{value:.16e}")
    }

    fn write_f32<W: ?Sized + Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(writer, value as f64)
    }

    fn begin_array<W: ?Sized + Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.0.begin_array(writer)
    }

    fn end_array<W: ?Sized + Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.0.end_array(writer)
    }

    fn begin_array_value<W: ?Sized + Write>(&mut self, writer: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_array_value(writer, first)
    }

    fn end_array_value<W: ?Sized + Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.0.end_array_value(writer)
    }

    fn begin_object<W: ?Sized + Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.0.begin_object(writer)
    }

    fn end_object<W: ?Sized + Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.0.end_object(writer)
    }

    fn begin_object_key<W: ?Sized + Write>(&mut self, writer: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_object_key(writer, first)
    }

    fn begin_object_value<W: ?Sized + Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.0.begin_object_value(writer)
    }

    fn end_object_value<W: ?Sized + Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.0.end_object_value(writer)
    }
}

pub fn to_json_string<T: Serialize + ?Sized>(value: &T) -> Result<String> {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, SigFigs(PrettyFormatter::new()));
    value
        .serialize(&mut ser)
        .map_err(|e| Error::Json(e.to_string()))?;
    buf.push(b'\n');
    Ok(String::from_utf8(buf).expect("serde_json writes UTF-8"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{identity, max_abs, pauli_y, pauli_z};
    use serde_json::json;

    #[test]
    fn matrix_round_trip() {
        let m = pauli_y() + identity(2) * c(0.125, 0.0);
        let v = matrix_to_value(&m);
        assert!(max_abs(&(parse_matrix(&v, "m").unwrap() - m)) == 0.0);
        let real = json!({"rows": 2, "cols": 2, "data": [1, 0, 0, -1]});
        assert_eq!(parse_matrix(&real, "m").unwrap(), pauli_z());
    }

    #[test]
    fn matrix_errors_name_the_field() {
        let bad = json!({"rows": 2, "cols": 2, "data": [1, 0, "x", -1]});
        let e = parse_matrix(&bad, "noise.kraus[0]").unwrap_err().to_string();
        assert!(e.contains("noise.kraus[0].data[2]"), "{e}");
        let short = json!({"rows": 2, "cols": 2, "data": [1]});
        assert!(parse_matrix(&short, "m").is_err());
    }

    #[test]
    fn channel_forms() {
        let deph = parse_channel(&json!({"builtin": "dephasing", "params": {"p": 0.5}}), "n").unwrap();
        assert_eq!(deph.len(), 2);
        let ss = json!({
            "builtin": "single_site",
            "params": {"site": 1, "n_qubits": 2},
            "inner": {"builtin": "bit_flip", "params": {"p": 0.1}}
        });
        assert_eq!(parse_channel(&ss, "n").unwrap().d_in(), 4);
        let composed = json!({"compose": [
            {"builtin": "dephasing", "params": {"p": 0.2}},
            {"builtin": "amplitude_damping", "params": {"gamma": 0.3}}
        ]});
        assert_eq!(parse_channel(&composed, "n").unwrap().len(), 4);
        let iso = json!({"isometry": {"rows": 2, "cols": 1, "data": [1, 0]}});
        assert_eq!(parse_channel(&iso, "e").unwrap().d_out(), 2);
        let kraus = json!({"kraus": [{"rows": 1, "cols": 1, "data": [1]}], "d_in": 2});
        assert!(parse_channel(&kraus, "n")
            .unwrap_err()
            .to_string()
            .contains("d_in"));
        assert!(parse_channel(&json!({"builtin": "nope"}), "n").is_err());
        assert!(parse_channel(&json!({"foo": 1}), "n").is_err());
    }

    #[test]
    fn covariant_isometry_form() {
        let z = json!({"rows": 2, "cols": 2, "data": [1, 0, 0, -1]});
        let zi = json!({"rows": 4, "cols": 4, "data": [
            1, 0, 0, 0, 0, 1, 0, 0, 0, 0, -1, 0, 0, 0, 0, -1]});
        let v = json!({"covariant_isometry": {"H_L": z, "H_S": zi, "assignment": [[0, 0], [1, 2]]}});
        let w = parse_isometry(&v, "encoding").unwrap();
        assert_eq!((w.d_s(), w.d_l()), (4, 2));
        let sym = parse_symmetry(&json!({"H_L": z, "H_S": zi}), "symmetry").unwrap();
        assert_eq!(sym.as_ref().len(), 1);
    }

    #[test]
    fn floats_use_seventeen_digits() {
        let s = to_json_string(&json!({"x": 0.1, "y": 2.0, "z": [1.0e-300]})).unwrap();
        assert!(s.contains("1.0000000000000001e-1"), "{s}");
        assert!(s.contains("2.0000000000000000e0"), "{s}");
        let back: Value = serde_json::from_str(&s).unwrap();
        assert_eq!(back["x"].as_f64(), Some(0.1));
        assert_eq!(back["z"][0].as_f64(), Some(1.0e-300));
    }
}

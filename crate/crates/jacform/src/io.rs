//! Exact JSON file format for forms, decompositions, and component tuples.
//!
//! Rationals are stored as integer pairs and the index as the integral
//! matrix 2m, so files are bit-exact and diffable. The core document is
//!
//! ```json
//! {
//!   "h": 1, "k": 4, "s": 0, "level": 1, "trunc": 10,
//!   "two_m": [[2]],
//!   "coeffs": [ {"n_num": 1, "n_den": 1, "r": [2], "value": [[0, 0, 240, 1]]} ]
//! }
//! ```
//!
//! where each value entry is `[x_exp, ν₁, …, ν_h, num, den]`. Nearly
//! holomorphic elements extend each coefficient entry with the exponents
//! `"nu"` and `"rb"` of its α^ν β^r prefactor. Integers of any size are
//! preserved exactly (`serde_json` with `arbitrary_precision`).

use std::str::FromStr;

use num_bigint::BigInt;
use serde_json::{json, Map, Number, Value};

use crate::error::{Error, Result};
use crate::exact::{HalfIntSymMatrix, MultiIndexPair, Rational, RationalMatrix};
use crate::nearly::{FourierMode, FourierPoly, NearlyHoloElt};
use crate::project::NHDecomposition;
use crate::split::ComponentTuple;
use crate::sympow::SymPoly;
use crate::theta::JacobiFormData;

fn parse_err(location: &str, message: impl Into<String>) -> Error {
    Error::Parse {
        location: location.to_string(),
        message: message.into(),
    }
}

fn bigint_number(x: &BigInt) -> Value {
    Value::Number(Number::from_str(&x.to_string()).expect("integer is a valid JSON number"))
}

fn as_bigint(v: &Value, loc: &str) -> Result<BigInt> {
    match v {
        Value::Number(n) => BigInt::from_str(&n.to_string())
            .map_err(|_| parse_err(loc, format!("expected an integer, found {n}"))),
        other => Err(parse_err(loc, format!("expected an integer, found {other}"))),
    }
}

fn as_i64(v: &Value, loc: &str) -> Result<i64> {
    let big = as_bigint(v, loc)?;
    i64::try_from(big).map_err(|_| parse_err(loc, "integer out of range"))
}

fn as_u32(v: &Value, loc: &str) -> Result<u32> {
    let big = as_i64(v, loc)?;
    u32::try_from(big).map_err(|_| parse_err(loc, "expected a small non-negative integer"))
}

fn as_usize(v: &Value, loc: &str) -> Result<usize> {
    let big = as_i64(v, loc)?;
    usize::try_from(big).map_err(|_| parse_err(loc, "expected a non-negative integer"))
}

fn as_array<'a>(v: &'a Value, loc: &str) -> Result<&'a Vec<Value>> {
    v.as_array()
        .ok_or_else(|| parse_err(loc, "expected an array"))
}

fn as_object<'a>(v: &'a Value, loc: &str) -> Result<&'a Map<String, Value>> {
    v.as_object()
        .ok_or_else(|| parse_err(loc, "expected an object"))
}

fn field<'a>(obj: &'a Map<String, Value>, name: &str, loc: &str) -> Result<&'a Value> {
    obj.get(name)
        .ok_or_else(|| parse_err(loc, format!("missing field `{name}`")))
}

fn rational_value(num: &Value, den: &Value, loc: &str) -> Result<Rational> {
    let n = as_bigint(num, loc)?;
    let d = as_bigint(den, loc)?;
    if d == BigInt::from(0) {
        return Err(parse_err(loc, "zero denominator"));
    }
    Ok(Rational::new(n, d))
}

fn two_m_json(m: &HalfIntSymMatrix) -> Value {
    Value::Array(
        m.two_m()
            .iter()
            .map(|row| Value::Array(row.iter().map(bigint_number).collect()))
            .collect(),
    )
}

fn two_m_parse(v: &Value, loc: &str) -> Result<HalfIntSymMatrix> {
    let rows = as_array(v, loc)?;
    let h = rows.len();
    let mut mat = RationalMatrix::zeros(h, h);
    for (i, row) in rows.iter().enumerate() {
        let row = as_array(row, loc)?;
        if row.len() != h {
            return Err(parse_err(loc, "two_m must be square"));
        }
        for (j, entry) in row.iter().enumerate() {
            let e = as_bigint(entry, loc)?;
            mat.set(i, j, Rational::new(e, BigInt::from(2)));
        }
    }
    HalfIntSymMatrix::new(mat).map_err(|e| parse_err(loc, e.to_string()))
}

fn value_entries(value: &SymPoly<Rational>) -> Value {
    let mut out = Vec::new();
    for (nu_v, c) in value.iter() {
        let mut entry = vec![Value::from(value.x_exp(nu_v))];
        for e in nu_v {
            entry.push(Value::from(*e));
        }
        entry.push(bigint_number(c.numer()));
        entry.push(bigint_number(c.denom()));
        out.push(Value::Array(entry));
    }
    Value::Array(out)
}

fn value_parse(v: &Value, s: u32, h: usize, loc: &str) -> Result<SymPoly<Rational>> {
    let entries = as_array(v, loc)?;
    let mut out = SymPoly::zero(s, h);
    for (i, entry) in entries.iter().enumerate() {
        let eloc = format!("{loc}.value[{i}]");
        let entry = as_array(entry, &eloc)?;
        if entry.len() != h + 3 {
            return Err(parse_err(
                &eloc,
                format!("expected [x_exp, {h} exponents, num, den]"),
            ));
        }
        let x_exp = as_u32(&entry[0], &eloc)?;
        let nu: Vec<u32> = entry[1..=h]
            .iter()
            .map(|e| as_u32(e, &eloc))
            .collect::<Result<_>>()?;
        let total: u32 = nu.iter().sum::<u32>() + x_exp;
        if total != s {
            return Err(parse_err(
                &eloc,
                format!("monomial degree {total} does not match s = {s}"),
            ));
        }
        let c = rational_value(&entry[h + 1], &entry[h + 2], &eloc)?;
        out.add_to(nu, c);
    }
    Ok(out)
}

fn coeff_entry(mode: &FourierMode, value: &SymPoly<Rational>) -> Value {
    json!({
        "n_num": Value::Number(Number::from_str(&mode.n.numer().to_string()).unwrap()),
        "n_den": Value::Number(Number::from_str(&mode.n.denom().to_string()).unwrap()),
        "r": mode.r.clone(),
        "value": value_entries(value),
    })
}

fn fourier_json(fp: &FourierPoly) -> Value {
    Value::Array(
        fp.modes()
            .map(|(mode, value)| coeff_entry(mode, value))
            .collect(),
    )
}

fn fourier_parse(v: &Value, h: usize, level: u32, s: u32, loc: &str) -> Result<FourierPoly> {
    let entries = as_array(v, loc)?;
    let mut fp = FourierPoly::new(h, level, s);
    for (i, entry) in entries.iter().enumerate() {
        let eloc = format!("{loc}[{i}]");
        let obj = as_object(entry, &eloc)?;
        let n = rational_value(
            field(obj, "n_num", &eloc)?,
            field(obj, "n_den", &eloc)?,
            &eloc,
        )?;
        let r: Vec<i64> = as_array(field(obj, "r", &eloc)?, &eloc)?
            .iter()
            .map(|e| as_i64(e, &eloc))
            .collect::<Result<_>>()?;
        let value = value_parse(field(obj, "value", &eloc)?, s, h, &eloc)?;
        fp.insert(FourierMode::new(n, r), value)
            .map_err(|e| parse_err(&eloc, e.to_string()))?;
    }
    Ok(fp)
}

/// Serialize a concrete Jacobi form.
pub fn serialize_form(form: &JacobiFormData) -> String {
    let doc = json!({
        "h": form.h,
        "k": form.k,
        "s": form.s,
        "level": form.level,
        "trunc": form.trunc,
        "two_m": two_m_json(&form.index),
        "coeffs": fourier_json(&form.coeffs),
    });
    serde_json::to_string_pretty(&doc).expect("document serializes")
}

/// Parse a Jacobi form document; with `strict` set, data violating the
/// support condition is rejected.
pub fn deserialize_form(text: &str, strict: bool) -> Result<JacobiFormData> {
    let doc: Value = serde_json::from_str(text)
        .map_err(|e| parse_err("document", e.to_string()))?;
    let obj = as_object(&doc, "document")?;
    let h = as_usize(field(obj, "h", "h")?, "h")?;
    let k = as_i64(field(obj, "k", "k")?, "k")?;
    let s = as_u32(field(obj, "s", "s")?, "s")?;
    let level = as_u32(field(obj, "level", "level")?, "level")?;
    let trunc = as_u32(field(obj, "trunc", "trunc")?, "trunc")?;
    let index = two_m_parse(field(obj, "two_m", "two_m")?, "two_m")?;
    if index.h() != h {
        return Err(parse_err("two_m", "index size differs from h"));
    }
    let coeffs = fourier_parse(field(obj, "coeffs", "coeffs")?, h, level, s, "coeffs")?;
    let form = JacobiFormData {
        h,
        k,
        s,
        index,
        level,
        trunc,
        coeffs,
    };
    if strict {
        let bad = form.check_support();
        if !bad.is_empty() {
            return Err(parse_err(
                "coeffs",
                format!("support violation at mode {}", bad[0]),
            ));
        }
    }
    Ok(form)
}

/// Serialize a nearly holomorphic element; each coefficient entry carries
/// its α^ν β^r exponents.
pub fn serialize_nearly(f: &NearlyHoloElt) -> String {
    let mut coeffs = Vec::new();
    for (pair, fp) in f.terms() {
        for (mode, value) in fp.modes() {
            let mut entry = as_object(&coeff_entry(mode, value), "entry")
                .unwrap()
                .clone();
            entry.insert("nu".into(), json!(pair.nu));
            entry.insert("rb".into(), json!(pair.r));
            coeffs.push(Value::Object(entry));
        }
    }
    let doc = json!({
        "h": f.h(),
        "k": f.k(),
        "s": f.s(),
        "level": f.level(),
        "two_m": two_m_json(f.index()),
        "coeffs": coeffs,
    });
    serde_json::to_string_pretty(&doc).expect("document serializes")
}

pub fn deserialize_nearly(text: &str) -> Result<NearlyHoloElt> {
    let doc: Value = serde_json::from_str(text)
        .map_err(|e| parse_err("document", e.to_string()))?;
    let obj = as_object(&doc, "document")?;
    let h = as_usize(field(obj, "h", "h")?, "h")?;
    let k = as_i64(field(obj, "k", "k")?, "k")?;
    let s = as_u32(field(obj, "s", "s")?, "s")?;
    let level = as_u32(field(obj, "level", "level")?, "level")?;
    let index = two_m_parse(field(obj, "two_m", "two_m")?, "two_m")?;
    let mut out = NearlyHoloElt::zero(k, s, index, level);
    for (i, entry) in as_array(field(obj, "coeffs", "coeffs")?, "coeffs")?
        .iter()
        .enumerate()
    {
        let eloc = format!("coeffs[{i}]");
        let eobj = as_object(entry, &eloc)?;
        let nu: Vec<u32> = as_array(field(eobj, "nu", &eloc)?, &eloc)?
            .iter()
            .map(|e| as_u32(e, &eloc))
            .collect::<Result<_>>()?;
        let rb = as_u32(field(eobj, "rb", &eloc)?, &eloc)?;
        let n = rational_value(
            field(eobj, "n_num", &eloc)?,
            field(eobj, "n_den", &eloc)?,
            &eloc,
        )?;
        let r: Vec<i64> = as_array(field(eobj, "r", &eloc)?, &eloc)?
            .iter()
            .map(|e| as_i64(e, &eloc))
            .collect::<Result<_>>()?;
        let value = value_parse(field(eobj, "value", &eloc)?, s, h, &eloc)?;
        let mut fp = FourierPoly::new(h, level, s);
        fp.insert(FourierMode::new(n, r), value)
            .map_err(|e| parse_err(&eloc, e.to_string()))?;
        out.insert_term(MultiIndexPair::new(nu, rb), fp)
            .map_err(|e| parse_err(&eloc, e.to_string()))?;
    }
    Ok(out)
}

/// Serialize a scalar decomposition: one embedded form per ladder slot.
pub fn serialize_decomposition(dec: &NHDecomposition) -> String {
    let comps: Vec<Value> = dec
        .components
        .iter()
        .map(|(pair, fp)| {
            json!({
                "nu": pair.nu,
                "rb": pair.r,
                "weight": dec.k - pair.total_degree() as i64,
                "coeffs": fourier_json(fp),
            })
        })
        .collect();
    let doc = json!({
        "kind": "nh_decomposition",
        "h": dec.h(),
        "k": dec.k,
        "d": dec.d,
        "level": dec.level,
        "two_m": two_m_json(&dec.index),
        "components": comps,
    });
    serde_json::to_string_pretty(&doc).expect("document serializes")
}

/// Serialize a component tuple: levels of scalar forms.
pub fn serialize_tuple(t: &ComponentTuple) -> String {
    let parts: Vec<Value> = t
        .parts
        .iter()
        .enumerate()
        .map(|(l, level_parts)| {
            json!({
                "weight": t.k + l as i64,
                "forms": level_parts.iter().map(fourier_json).collect::<Vec<_>>(),
            })
        })
        .collect();
    let doc = json!({
        "kind": "component_tuple",
        "h": t.h(),
        "k": t.k,
        "s": t.s,
        "level": t.level,
        "two_m": two_m_json(&t.index),
        "parts": parts,
    });
    serde_json::to_string_pretty(&doc).expect("document serializes")
}

/// Serialize a lattice specification.
pub fn serialize_lattice(l: &crate::theta::LatticeSpec) -> String {
    let doc = json!({
        "gram": l.gram(),
        "vectors": l.vectors(),
    });
    serde_json::to_string_pretty(&doc).expect("document serializes")
}

pub fn deserialize_lattice(text: &str) -> Result<crate::theta::LatticeSpec> {
    let doc: Value = serde_json::from_str(text)
        .map_err(|e| parse_err("document", e.to_string()))?;
    let obj = as_object(&doc, "document")?;
    let gram: Vec<Vec<i64>> = as_array(field(obj, "gram", "gram")?, "gram")?
        .iter()
        .map(|row| {
            as_array(row, "gram")?
                .iter()
                .map(|e| as_i64(e, "gram"))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;
    let vectors: Vec<Vec<i64>> = as_array(field(obj, "vectors", "vectors")?, "vectors")?
        .iter()
        .map(|row| {
            as_array(row, "vectors")?
                .iter()
                .map(|e| as_i64(e, "vectors"))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;
    crate::theta::LatticeSpec::new(gram, vectors)
        .map_err(|e| parse_err("lattice", e.to_string()))
}

/// Parse `{ "two_m": [[...]] }` as a Jacobi index file.
pub fn deserialize_index(text: &str) -> Result<HalfIntSymMatrix> {
    let doc: Value = serde_json::from_str(text)
        .map_err(|e| parse_err("document", e.to_string()))?;
    let obj = as_object(&doc, "document")?;
    two_m_parse(field(obj, "two_m", "two_m")?, "two_m")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{rat, rat_int};
    use crate::theta::{theta_series, LatticeSpec};
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};

    #[test]
    fn form_round_trip_theta() {
        let theta = theta_series(&LatticeSpec::a2(&[0, 1]).unwrap(), 4).unwrap();
        let text = serialize_form(&theta);
        let back = deserialize_form(&text, true).unwrap();
        assert_eq!(back, theta);
    }

    #[test]
    fn huge_integers_survive() {
        let mut fp = FourierPoly::new(1, 1, 0);
        let big = BigInt::from(2).pow(130) + BigInt::from(17);
        fp.insert(
            FourierMode::new(rat_int(1), vec![2]),
            SymPoly::scalar(1, Rational::new(big.clone(), BigInt::from(3))),
        )
        .unwrap();
        let form = JacobiFormData {
            h: 1,
            k: 4,
            s: 0,
            index: HalfIntSymMatrix::identity(1),
            level: 1,
            trunc: 1,
            coeffs: fp,
        };
        let text = serialize_form(&form);
        let back = deserialize_form(&text, false).unwrap();
        assert_eq!(back, form);
    }

    #[test]
    fn strict_mode_rejects_support_violations() {
        let mut fp = FourierPoly::new(1, 1, 0);
        fp.insert(
            FourierMode::new(rat_int(0), vec![1]),
            SymPoly::scalar(1, rat_int(1)),
        )
        .unwrap();
        let form = JacobiFormData {
            h: 1,
            k: 4,
            s: 0,
            index: HalfIntSymMatrix::identity(1),
            level: 1,
            trunc: 1,
            coeffs: fp,
        };
        let text = serialize_form(&form);
        assert!(deserialize_form(&text, false).is_ok());
        assert!(matches!(
            deserialize_form(&text, true),
            Err(Error::Parse { .. })
        ));
    }

    #[test]
    fn non_half_integral_index_rejected() {
        let text = r#"{"h":1,"k":4,"s":0,"level":1,"trunc":1,"two_m":[[1]],"coeffs":[]}"#;
        // two_m = [[1]] means m = [1/2]: diagonal not integral.
        assert!(matches!(
            deserialize_form(text, false),
            Err(Error::Parse { .. })
        ));
    }

    #[test]
    fn parse_errors_carry_location() {
        let text = r#"{"h":1,"k":4,"s":0,"level":1,"trunc":1,"two_m":[[2]],
            "coeffs":[{"n_num":1,"n_den":0,"r":[0],"value":[]}]}"#;
        match deserialize_form(text, false) {
            Err(Error::Parse { location, .. }) => assert!(location.contains("coeffs[0]")),
            other => panic!("expected a located parse error, got {other:?}"),
        }
    }

    #[test]
    fn nearly_holomorphic_round_trip() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2);
        let idx = crate::exact::random_half_integral(&mut rng, 2, true);
        let mut f = NearlyHoloElt::zero(5, 1, idx, 1);
        let mut fp = FourierPoly::new(2, 1, 1);
        fp.insert(
            FourierMode::new(rat_int(1), vec![1, -1]),
            SymPoly::monomial(1, 2, vec![0, 1], rat(7, 3)).unwrap(),
        )
        .unwrap();
        f.insert_term(MultiIndexPair::new(vec![1, 0], 1), fp).unwrap();
        let text = serialize_nearly(&f);
        assert_eq!(deserialize_nearly(&text).unwrap(), f);
    }

    #[test]
    fn lattice_round_trip() {
        let lat = LatticeSpec::e8(&[0, 2]).unwrap();
        let text = serialize_lattice(&lat);
        assert_eq!(deserialize_lattice(&text).unwrap(), lat);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn random_form_round_trip(seed in 0u64..10_000) {
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let h = rng.gen_range(1..=3usize);
            let level = rng.gen_range(1..=3u32);
            let s = rng.gen_range(0..=2u32);
            let idx = crate::exact::random_half_integral(&mut rng, h, false);
            let mut fp = FourierPoly::new(h, level, s);
            for _ in 0..rng.gen_range(0..5) {
                let n = rat(rng.gen_range(-9..=9), level as i64);
                let r: Vec<i64> = (0..h).map(|_| rng.gen_range(-4..=4)).collect();
                let keys = crate::exact::y_monomials(rng.gen_range(0..=s), h);
                let key = keys[rng.gen_range(0..keys.len())].clone();
                let c = rat(rng.gen_range(-99..=99), rng.gen_range(1..=99));
                fp.insert(
                    FourierMode::new(n, r),
                    SymPoly::monomial(s, h, key, c).unwrap(),
                )
                .unwrap();
            }
            let form = JacobiFormData {
                h,
                k: rng.gen_range(-3..=9),
                s,
                index: idx,
                level,
                trunc: rng.gen_range(1..=20),
                coeffs: fp,
            };
            let text = serialize_form(&form);
            prop_assert_eq!(deserialize_form(&text, false).unwrap(), form);
        }
    }
}

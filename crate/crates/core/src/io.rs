//! JSON files: spaces with named entourages, groups, witnesses, operators and
//! beta certificates.
//!
//! Points are referred to by label everywhere. Floats are written with 17
//! significant digits; complex values are written as a bare number when the
//! imaginary part is zero and as `[re, im]` otherwise. Unknown keys are
//! rejected, and every schema error carries the JSON pointer of the offending
//! value.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::Path;
use std::sync::Arc;

use serde_json::{Map, Value};

use crate::coarse::{Entourage, Space};
use crate::error::{Error, Result};
use crate::gallery::{FiniteGroup, MetricTable};
use crate::linalg::C64;
use crate::onl::BetaCertificate;
use crate::roe::BandedOperator;
use crate::witness::{FolnerWitness, KernelMatrix, L1Profile, L2Profile, Variant};

/// `v` with 17 significant digits, or `inf`, `-inf`, `nan`.
pub fn format_f64(v: f64) -> String {
    if v.is_nan() {
        "nan".into()
    } else if v.is_infinite() {
        if v > 0.0 { "inf".into() } else { "-inf".into() }
    } else {
        format!("{v:.16e}")
    }
}

struct DigitsFormatter;

impl serde_json::ser::Formatter for DigitsFormatter {
    fn write_f64<W: ?Sized + Write>(&mut self, writer: &mut W, value: f64) -> std::io::Result<()> {
        writer.write_all(format_f64(value).as_bytes())
    }

    fn write_f32<W: ?Sized + Write>(&mut self, writer: &mut W, value: f32) -> std::io::Result<()> {
        self.write_f64(writer, value as f64)
    }
}

/// Compact JSON with 17-digit floats and a trailing newline. Non-finite
/// floats must already have been replaced by strings.
pub fn to_json_string(v: &Value) -> String {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, DigitsFormatter);
    serde::Serialize::serialize(v, &mut ser).expect("writing to memory");
    out.push(b'\n');
    String::from_utf8(out).expect("JSON is UTF-8")
}

/// A float as JSON; non-finite values become the strings of [`format_f64`].
pub fn float_value(v: f64) -> Value {
    serde_json::Number::from_f64(v).map_or_else(|| Value::String(format_f64(v)), Value::Number)
}

fn complex_value(z: C64) -> Value {
    if z.im == 0.0 {
        float_value(z.re)
    } else {
        Value::Array(vec![float_value(z.re), float_value(z.im)])
    }
}

fn escape(key: &str) -> String {
    key.replace('~', "~0").replace('/', "~1")
}

pub(crate) fn schema(ptr: &str, message: impl Into<String>) -> Error {
    Error::Schema { pointer: if ptr.is_empty() { "/".into() } else { ptr.into() }, message: message.into() }
}

/// A JSON object being read, remembering its pointer and the keys consumed.
pub(crate) struct Obj<'a> {
    map: &'a Map<String, Value>,
    ptr: String,
    seen: Vec<&'static str>,
}

impl<'a> Obj<'a> {
    pub(crate) fn new(v: &'a Value, ptr: &str) -> Result<Obj<'a>> {
        match v {
            Value::Object(map) => Ok(Obj { map, ptr: ptr.to_string(), seen: Vec::new() }),
            _ => Err(schema(ptr, "expected an object")),
        }
    }

    pub(crate) fn child(&self, key: &str) -> String {
        format!("{}/{}", self.ptr, escape(key))
    }

    pub(crate) fn req(&mut self, key: &'static str) -> Result<(&'a Value, String)> {
        self.seen.push(key);
        match self.map.get(key) {
            Some(v) => Ok((v, self.child(key))),
            None => Err(schema(&self.child(key), "missing required key")),
        }
    }

    pub(crate) fn opt(&mut self, key: &'static str) -> Option<(&'a Value, String)> {
        self.seen.push(key);
        self.map.get(key).map(|v| (v, self.child(key)))
    }

    pub(crate) fn finish(self) -> Result<()> {
        match self.map.keys().find(|k| !self.seen.contains(&k.as_str())) {
            Some(k) => Err(schema(&self.child(k), "unknown key")),
            None => Ok(()),
        }
    }
}

pub(crate) fn as_array<'a>(v: &'a Value, ptr: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| schema(ptr, "expected an array"))
}

pub(crate) fn as_str<'a>(v: &'a Value, ptr: &str) -> Result<&'a str> {
    v.as_str().ok_or_else(|| schema(ptr, "expected a string"))
}

pub(crate) fn as_f64(v: &Value, ptr: &str) -> Result<f64> {
    match v {
        Value::Number(n) => n.as_f64().ok_or_else(|| schema(ptr, "expected a number")),
        Value::String(s) => match s.as_str() {
            "inf" => Ok(f64::INFINITY),
            "-inf" => Ok(f64::NEG_INFINITY),
            "nan" => Ok(f64::NAN),
            _ => Err(schema(ptr, "expected a number")),
        },
        _ => Err(schema(ptr, "expected a number")),
    }
}

pub(crate) fn as_u64(v: &Value, ptr: &str) -> Result<u64> {
    v.as_u64().ok_or_else(|| schema(ptr, "expected a nonnegative integer"))
}

fn as_complex(v: &Value, ptr: &str) -> Result<C64> {
    match v {
        Value::Array(parts) if parts.len() == 2 => {
            Ok(C64::new(as_f64(&parts[0], &format!("{ptr}/0"))?, as_f64(&parts[1], &format!("{ptr}/1"))?))
        }
        Value::Array(_) => Err(schema(ptr, "complex values are [re, im]")),
        _ => Ok(C64::new(as_f64(v, ptr)?, 0.0)),
    }
}

pub(crate) fn point(space: &Space, v: &Value, ptr: &str) -> Result<usize> {
    let label = as_str(v, ptr)?;
    space.id(label).map_err(|_| schema(ptr, format!("unknown point `{label}`")))
}

pub(crate) fn parse_value(text: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(|e| schema("/", format!("invalid JSON: {e}")))
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text)?;
    Ok(())
}

/// A space with named entourages.
fn pairs_value(e: &Entourage) -> Value {
    let s = e.space();
    e.pairs().map(|(x, y)| Value::Array(vec![s.label(x).into(), s.label(y).into()])).collect()
}

fn read_pairs(space: &Arc<Space>, v: &Value, ptr: &str) -> Result<Entourage> {
    let pairs = as_array(v, ptr)?
        .iter()
        .enumerate()
        .map(|(k, pv)| {
            let p = format!("{ptr}/{k}");
            match pv.as_array() {
                Some(xy) if xy.len() == 2 => {
                    Ok((point(space, &xy[0], &format!("{p}/0"))?, point(space, &xy[1], &format!("{p}/1"))?))
                }
                _ => Err(schema(&p, "a pair is [label, label]")),
            }
        })
        .collect::<Result<Vec<_>>>()?;
    Entourage::from_pairs(space, pairs)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpaceFile {
    pub space: Arc<Space>,
    pub entourages: Vec<(String, Entourage)>,
}

impl SpaceFile {
    pub fn new(space: Arc<Space>) -> SpaceFile {
        SpaceFile { space, entourages: Vec::new() }
    }

    pub fn get(&self, name: &str) -> Result<&Entourage> {
        self.entourages
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, e)| e)
            .ok_or_else(|| Error::Config(format!("no entourage named `{name}`")))
    }

    /// Name of an entourage equal to `e`, if one is stored.
    pub fn name_of(&self, e: &Entourage) -> Option<&str> {
        self.entourages.iter().find(|(_, f)| f == e).map(|(n, _)| n.as_str())
    }

    /// Adds `e` under `name`, replacing an entourage of the same name.
    pub fn insert(&mut self, name: &str, e: Entourage) -> Result<()> {
        if !crate::coarse::same_space(&self.space, e.space()) {
            return Err(Error::SpaceMismatch);
        }
        match self.entourages.iter_mut().find(|(n, _)| n == name) {
            Some(slot) => slot.1 = e,
            None => self.entourages.push((name.to_string(), e)),
        }
        Ok(())
    }

    /// The stored name of `e`, registering it as `fallback` if absent.
    pub fn ensure(&mut self, e: &Entourage, fallback: &str) -> Result<String> {
        if let Some(n) = self.name_of(e) {
            return Ok(n.to_string());
        }
        self.insert(fallback, e.clone())?;
        Ok(fallback.to_string())
    }

    pub fn to_value(&self) -> Value {
        let s = &self.space;
        let ents = self
            .entourages
            .iter()
            .map(|(name, e)| {
                let mut m = Map::new();
                m.insert("name".into(), name.clone().into());
                m.insert("pairs".into(), pairs_value(e));
                Value::Object(m)
            })
            .collect();
        let mut m = Map::new();
        m.insert("points".into(), s.labels().iter().map(|l| Value::from(l.clone())).collect());
        m.insert("entourages".into(), Value::Array(ents));
        Value::Object(m)
    }

    pub fn from_value(v: &Value) -> Result<SpaceFile> {
        let mut o = Obj::new(v, "")?;
        let (points, pp) = o.req("points")?;
        let labels = as_array(points, &pp)?
            .iter()
            .enumerate()
            .map(|(i, l)| as_str(l, &format!("{pp}/{i}")).map(str::to_string))
            .collect::<Result<Vec<_>>>()?;
        let space = Space::new(labels).map_err(|e| schema(&pp, e.to_string()))?;
        let (ents, ep) = o.req("entourages")?;
        let mut file = SpaceFile::new(space.clone());
        for (i, ev) in as_array(ents, &ep)?.iter().enumerate() {
            let mut eo = Obj::new(ev, &format!("{ep}/{i}"))?;
            let (name, np) = eo.req("name")?;
            let name = as_str(name, &np)?;
            if file.entourages.iter().any(|(n, _)| n == name) {
                return Err(schema(&np, format!("duplicate entourage name `{name}`")));
            }
            let (pairs, pp) = eo.req("pairs")?;
            let e = read_pairs(&space, pairs, &pp)?;
            eo.finish()?;
            file.entourages.push((name.to_string(), e));
        }
        o.finish()?;
        Ok(file)
    }

    /// How artifacts refer to `e`: its stored name, or its pairs inline.
    pub fn reference(&self, e: &Entourage) -> Value {
        match self.name_of(e) {
            Some(n) => n.into(),
            None => pairs_value(e),
        }
    }

    /// Resolves a name or an inline pair list.
    pub fn resolve(&self, v: &Value, ptr: &str) -> Result<Entourage> {
        match v {
            Value::String(name) => {
                self.get(name).map(Entourage::clone).map_err(|_| schema(ptr, format!("no entourage named `{name}`")))
            }
            Value::Array(_) => read_pairs(&self.space, v, ptr),
            _ => Err(schema(ptr, "expected an entourage name or a list of pairs")),
        }
    }

    pub fn to_json(&self) -> String {
        to_json_string(&self.to_value())
    }

    pub fn from_json(text: &str) -> Result<SpaceFile> {
        Self::from_value(&parse_value(text)?)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        write_file(path, &self.to_json())
    }

    pub fn load(path: &Path) -> Result<SpaceFile> {
        Self::from_json(&fs::read_to_string(path)?)
    }
}

pub fn group_to_value(g: &FiniteGroup) -> Value {
    let mut m = Map::new();
    m.insert("elements".into(), g.elements().iter().map(|e| Value::from(e.clone())).collect());
    m.insert(
        "table".into(),
        g.table().iter().map(|row| row.iter().map(|&v| Value::from(v)).collect::<Value>()).collect(),
    );
    m.insert("generators".into(), g.generators().iter().map(|&v| Value::from(v)).collect());
    Value::Object(m)
}

pub fn group_from_value(v: &Value) -> Result<FiniteGroup> {
    let mut o = Obj::new(v, "")?;
    let (elements, ep) = o.req("elements")?;
    let elements = as_array(elements, &ep)?
        .iter()
        .enumerate()
        .map(|(i, e)| as_str(e, &format!("{ep}/{i}")).map(str::to_string))
        .collect::<Result<Vec<_>>>()?;
    let (table, tp) = o.req("table")?;
    let table = as_array(table, &tp)?
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let rp = format!("{tp}/{i}");
            as_array(row, &rp)?
                .iter()
                .enumerate()
                .map(|(j, c)| as_u64(c, &format!("{rp}/{j}")).map(|c| c as usize))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let (gens, gp) = o.req("generators")?;
    let gens = as_array(gens, &gp)?
        .iter()
        .enumerate()
        .map(|(i, c)| as_u64(c, &format!("{gp}/{i}")).map(|c| c as usize))
        .collect::<Result<Vec<_>>>()?;
    o.finish()?;
    FiniteGroup::new(elements, table, gens)
}

pub fn load_group(path: &Path) -> Result<FiniteGroup> {
    group_from_value(&parse_value(&fs::read_to_string(path)?)?)
}

pub fn save_group(g: &FiniteGroup, path: &Path) -> Result<()> {
    write_file(path, &to_json_string(&group_to_value(g)))
}

/// `{"points": [labels], "dist": [[d, ...], ...]}`, validated as a metric.
pub fn metric_from_value(v: &Value) -> Result<MetricTable> {
    let mut o = Obj::new(v, "")?;
    let (points, pp) = o.req("points")?;
    let labels = as_array(points, &pp)?
        .iter()
        .enumerate()
        .map(|(i, l)| as_str(l, &format!("{pp}/{i}")).map(str::to_string))
        .collect::<Result<Vec<_>>>()?;
    let (dist, dp) = o.req("dist")?;
    let dist = as_array(dist, &dp)?
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let rp = format!("{dp}/{i}");
            as_array(row, &rp)?.iter().enumerate().map(|(j, d)| as_f64(d, &format!("{rp}/{j}"))).collect()
        })
        .collect::<Result<Vec<Vec<f64>>>>()?;
    o.finish()?;
    MetricTable::new(labels, dist)
}

pub fn load_metric(path: &Path) -> Result<MetricTable> {
    metric_from_value(&parse_value(&fs::read_to_string(path)?)?)
}

/// Any of the four witness forms.
#[derive(Debug, Clone, PartialEq)]
pub enum Witness {
    Folner(FolnerWitness),
    L1(L1Profile),
    L2(L2Profile),
    Kernel(KernelMatrix),
}

impl Witness {
    pub fn kind(&self) -> &'static str {
        match self {
            Witness::Folner(_) => "folner",
            Witness::L1(_) => "l1",
            Witness::L2(_) => "l2",
            Witness::Kernel(_) => "kernel",
        }
    }

    pub fn support(&self) -> &Entourage {
        match self {
            Witness::Folner(w) => w.support(),
            Witness::L1(p) => p.support(),
            Witness::L2(p) => p.support(),
            Witness::Kernel(k) => k.support(),
        }
    }
}

fn sparse_map<T>(space: &Space, rows: impl Iterator<Item = (usize, Vec<(usize, T)>)>, f: impl Fn(&T) -> Value) -> Value {
    let mut m = Map::new();
    for (x, row) in rows {
        let inner: Map<String, Value> = row.iter().map(|(y, v)| (space.label(*y).to_string(), f(v))).collect();
        m.insert(space.label(x).to_string(), Value::Object(inner));
    }
    Value::Object(m)
}

/// Reads `{x: {y: value}}` into per-point rows sorted by id.
fn read_sparse<T>(
    space: &Space,
    v: &Value,
    ptr: &str,
    read: impl Fn(&Value, &str) -> Result<T>,
) -> Result<Vec<Vec<(usize, T)>>> {
    let outer = v.as_object().ok_or_else(|| schema(ptr, "expected an object keyed by point"))?;
    let mut rows: Vec<Vec<(usize, T)>> = (0..space.len()).map(|_| Vec::new()).collect();
    for (xl, row) in outer {
        let xp = format!("{ptr}/{}", escape(xl));
        let x = space.id(xl).map_err(|_| schema(&xp, format!("unknown point `{xl}`")))?;
        let inner = row.as_object().ok_or_else(|| schema(&xp, "expected an object keyed by point"))?;
        for (yl, val) in inner {
            let yp = format!("{xp}/{}", escape(yl));
            let y = space.id(yl).map_err(|_| schema(&yp, format!("unknown point `{yl}`")))?;
            rows[x].push((y, read(val, &yp)?));
        }
        rows[x].sort_by_key(|e| e.0);
    }
    Ok(rows)
}

fn triples_value(space: &Space, entries: impl Iterator<Item = (usize, usize, C64)>) -> Value {
    entries
        .map(|(x, y, z)| {
            Value::Array(vec![space.label(x).into(), space.label(y).into(), float_value(z.re), float_value(z.im)])
        })
        .collect()
}

fn read_triples(space: &Space, v: &Value, ptr: &str) -> Result<Vec<(usize, usize, C64)>> {
    as_array(v, ptr)?
        .iter()
        .enumerate()
        .map(|(i, t)| {
            let tp = format!("{ptr}/{i}");
            match t.as_array() {
                Some(parts) if parts.len() == 4 => Ok((
                    point(space, &parts[0], &format!("{tp}/0"))?,
                    point(space, &parts[1], &format!("{tp}/1"))?,
                    C64::new(as_f64(&parts[2], &format!("{tp}/2"))?, as_f64(&parts[3], &format!("{tp}/3"))?),
                )),
                _ => Err(schema(&tp, "a triple is [x, y, re, im]")),
            }
        })
        .collect()
}

/// `{"type", "support", "data"}`; `support` names an entourage of the space
/// file or lists its pairs (see [`SpaceFile::reference`]).
pub fn witness_to_value(w: &Witness, support: impl Into<Value>) -> Value {
    let space = w.support().space();
    let data = match w {
        Witness::Folner(f) => {
            let mut m = Map::new();
            m.insert("variant".into(), f.variant().as_str().into());
            let rows = (0..space.len()).map(|x| (x, f.section(x).to_vec()));
            m.insert("sections".into(), sparse_map(space, rows, |&c| Value::from(c)));
            Value::Object(m)
        }
        Witness::L1(p) => sparse_map(space, (0..space.len()).map(|x| (x, p.vector(x).to_vec())), |&v| float_value(v)),
        Witness::L2(p) => sparse_map(space, (0..space.len()).map(|x| (x, p.vector(x).to_vec())), |&z| complex_value(z)),
        Witness::Kernel(k) => triples_value(space, k.entries()),
    };
    let mut m = Map::new();
    m.insert("type".into(), w.kind().into());
    m.insert("support".into(), support.into());
    m.insert("data".into(), data);
    Value::Object(m)
}

pub fn witness_from_value(v: &Value, file: &SpaceFile) -> Result<Witness> {
    let mut o = Obj::new(v, "")?;
    let (kind, kp) = o.req("type")?;
    let kind = as_str(kind, &kp)?;
    let (support, sp) = o.req("support")?;
    let support = file.resolve(support, &sp)?;
    let (data, dp) = o.req("data")?;
    let space = file.space.clone();
    let w = match kind {
        "folner" => {
            let mut d = Obj::new(data, &dp)?;
            let (variant, vp) = d.req("variant")?;
            let variant = match as_str(variant, &vp)? {
                "diagonal" => Variant::Diagonal,
                "nonempty" => Variant::Nonempty,
                other => return Err(schema(&vp, format!("unknown variant `{other}`"))),
            };
            let (sections, secp) = d.req("sections")?;
            let rows = read_sparse(&space, sections, &secp, as_u64)?;
            d.finish()?;
            let counts: Vec<_> = rows.iter().enumerate().flat_map(|(x, r)| r.iter().map(move |&(y, c)| (x, y, c))).collect();
            Witness::Folner(FolnerWitness::new(support, counts, variant)?)
        }
        "l1" => Witness::L1(L1Profile::new(support, read_sparse(&space, data, &dp, as_f64)?)?),
        "l2" => Witness::L2(L2Profile::new(support, read_sparse(&space, data, &dp, as_complex)?)?),
        "kernel" => Witness::Kernel(KernelMatrix::from_triples(support, &read_triples(&space, data, &dp)?)?),
        other => return Err(schema(&kp, format!("unknown witness type `{other}`"))),
    };
    o.finish()?;
    Ok(w)
}

pub fn save_witness(w: &Witness, support: impl Into<Value>, path: &Path) -> Result<()> {
    write_file(path, &to_json_string(&witness_to_value(w, support)))
}

pub fn load_witness(path: &Path, file: &SpaceFile) -> Result<Witness> {
    witness_from_value(&parse_value(&fs::read_to_string(path)?)?, file)
}

/// `{"band": name, "triples": [[x, y, re, im], ...]}`.
pub fn operator_to_value(b: &BandedOperator, band: impl Into<Value>) -> Value {
    let mut m = Map::new();
    m.insert("band".into(), band.into());
    m.insert("triples".into(), triples_value(b.space(), b.entries()));
    Value::Object(m)
}

pub fn operator_from_value(v: &Value, file: &SpaceFile) -> Result<BandedOperator> {
    let mut o = Obj::new(v, "")?;
    let (band, bp) = o.req("band")?;
    let band = file.resolve(band, &bp)?;
    let (triples, tp) = o.req("triples")?;
    let triples = read_triples(&file.space, triples, &tp)?;
    o.finish()?;
    BandedOperator::from_triples(band, &triples).map_err(|e| schema(&tp, e.to_string()))
}

pub fn save_operator(b: &BandedOperator, band: impl Into<Value>, path: &Path) -> Result<()> {
    write_file(path, &to_json_string(&operator_to_value(b, band)))
}

pub fn load_operator(path: &Path, file: &SpaceFile) -> Result<BandedOperator> {
    operator_from_value(&parse_value(&fs::read_to_string(path)?)?, file)
}

/// `{"constant", "window", "center", "ratio", "vector": {point: value}}`.
pub fn certificate_to_value(c: &BetaCertificate, window: impl Into<Value>) -> Value {
    let space = c.window.space();
    let vector: Map<String, Value> =
        c.vector.iter().map(|&(x, z)| (space.label(x).to_string(), complex_value(z))).collect();
    let mut m = Map::new();
    m.insert("constant".into(), float_value(c.constant));
    m.insert("window".into(), window.into());
    m.insert("center".into(), space.label(c.center).into());
    m.insert("ratio".into(), float_value(c.ratio));
    m.insert("vector".into(), Value::Object(vector));
    Value::Object(m)
}

pub fn certificate_from_value(v: &Value, file: &SpaceFile) -> Result<BetaCertificate> {
    let mut o = Obj::new(v, "")?;
    let (constant, cp) = o.req("constant")?;
    let constant = as_f64(constant, &cp)?;
    let (window, wp) = o.req("window")?;
    let window = file.resolve(window, &wp)?;
    let (center, cep) = o.req("center")?;
    let center = point(&file.space, center, &cep)?;
    let (ratio, rp) = o.req("ratio")?;
    let ratio = as_f64(ratio, &rp)?;
    let (vector, vp) = o.req("vector")?;
    let entries = vector.as_object().ok_or_else(|| schema(&vp, "expected an object keyed by point"))?;
    let mut vector: Vec<(usize, C64)> = entries
        .iter()
        .map(|(l, val)| {
            let p = format!("{vp}/{}", escape(l));
            let x = file.space.id(l).map_err(|_| schema(&p, format!("unknown point `{l}`")))?;
            Ok((x, as_complex(val, &p)?))
        })
        .collect::<Result<_>>()?;
    vector.sort_by_key(|e| e.0);
    o.finish()?;
    Ok(BetaCertificate { constant, window, vector, center, ratio })
}

pub fn save_certificate(c: &BetaCertificate, window: impl Into<Value>, path: &Path) -> Result<()> {
    write_file(path, &to_json_string(&certificate_to_value(c, window)))
}

pub fn load_certificate(path: &Path, file: &SpaceFile) -> Result<BetaCertificate> {
    certificate_from_value(&parse_value(&fs::read_to_string(path)?)?, file)
}

/// Reads a JSON document for callers that do their own schema walk.
pub fn read_json(path: &Path) -> Result<Value> {
    parse_value(&fs::read_to_string(path)?)
}

/// Key order used when an object is written: sorted, as `serde_json` does.
pub fn ordered(entries: impl IntoIterator<Item = (String, Value)>) -> Value {
    let m: BTreeMap<String, Value> = entries.into_iter().collect();
    Value::Object(m.into_iter().collect())
}

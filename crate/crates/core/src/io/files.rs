//! TOML documents for spaces, morphisms, data, diagrams, Σ-point suites and cover lists.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::poly::parse_polynomial;
use crate::cohomology::{FiniteDiagram, Matrix};
use crate::constructions::Datum;
use crate::criteria::{BaseData, RationalFunction, SigmaPoint};
use crate::error::{Result, WorkbenchError};
use crate::polyalg::{fmt_rational, Polynomial, Q};
use crate::poset::Poset;
use crate::rings::{find_certificate, LocalizationCertificate, PresentedRing, RingMap, Section};
use crate::spaces::{RingedSpace, SchematicMorphism};

fn is_false(b: &bool) -> bool {
    !*b
}

/// `[numerator, power]`: a target variable as `numerator / witness^power`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
struct SectionDoc(String, u32);

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
struct CertificateDoc {
    witness: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    inverse: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    sections: Vec<SectionDoc>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
struct ElementDoc {
    id: String,
    #[serde(default)]
    vars: Vec<String>,
    #[serde(default)]
    relations: Vec<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
struct RestrictionDoc {
    from: String,
    to: String,
    images: Vec<String>,
    #[serde(default, skip_serializing_if = "is_false")]
    assumed: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    certificate: Option<CertificateDoc>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
struct SpaceDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    name: Option<String>,
    #[serde(default, rename = "element")]
    elements: Vec<ElementDoc>,
    #[serde(default, rename = "restriction", skip_serializing_if = "Vec::is_empty")]
    restrictions: Vec<RestrictionDoc>,
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| WorkbenchError::Io(format!("{}: {e}", path.display())))
}

fn toml_error(e: toml::de::Error) -> WorkbenchError {
    WorkbenchError::Parse { message: e.message().trim().to_string(), offset: e.span().map_or(0, |s| s.start) }
}

fn ctx(e: WorkbenchError, what: &str) -> String {
    format!("{what}: {e}")
}

fn poly(text: &str, ring: &PresentedRing, what: &str) -> std::result::Result<Polynomial, String> {
    parse_polynomial(text, ring.vars()).map(|p| ring.reduce(&p)).map_err(|e| ctx(e, what))
}

fn certify(map: RingMap, doc: &CertificateDoc, what: &str) -> std::result::Result<RingMap, String> {
    let (a, b) = (map.source().clone(), map.target().clone());
    let witness = poly(&doc.witness, &a, what)?;
    let cert = match &doc.inverse {
        Some(inv) if !doc.sections.is_empty() => {
            let sections = doc
                .sections
                .iter()
                .map(|s| Ok(Section { numerator: poly(&s.0, &a, what)?, power: s.1 }))
                .collect::<std::result::Result<Vec<_>, String>>()?;
            LocalizationCertificate { witness, sections, inverse: poly(inv, &b, what)? }
        }
        _ => find_certificate(&map, &witness).map_err(|e| ctx(e, what))?,
    };
    map.certified(cert).map_err(|e| ctx(e, what))
}

fn ring_map(
    source: &Arc<PresentedRing>,
    target: &Arc<PresentedRing>,
    images: &[String],
    assumed: bool,
    certificate: Option<&CertificateDoc>,
    what: &str,
) -> std::result::Result<RingMap, String> {
    if images.len() != source.nvars() {
        return Err(format!("{what}: {} images for {} variables", images.len(), source.nvars()));
    }
    let imgs = images.iter().map(|t| poly(t, target, what)).collect::<std::result::Result<Vec<_>, _>>()?;
    let mut map = RingMap::new(source.clone(), target.clone(), imgs).map_err(|e| ctx(e, what))?;
    if assumed {
        map = map.assumed();
    }
    match certificate {
        Some(c) => certify(map, c, what),
        None => Ok(map),
    }
}

/// Parses a space document; element and map errors are collected into one list.
pub fn parse_space(text: &str) -> Result<RingedSpace> {
    let doc: SpaceDoc = toml::from_str(text).map_err(toml_error)?;
    let mut errors = Vec::new();
    let ids: Vec<String> = doc.elements.iter().map(|e| e.id.clone()).collect();
    let mut stalks = Vec::new();
    for e in &doc.elements {
        let names: Vec<String> = e.vars.clone();
        let rels: std::result::Result<Vec<Polynomial>, String> = e
            .relations
            .iter()
            .map(|r| parse_polynomial(r, &names).map_err(|err| ctx(err, &format!("element {}", e.id))))
            .collect();
        match rels.and_then(|r| PresentedRing::new(names, r).map_err(|err| ctx(err, &format!("element {}", e.id)))) {
            Ok(r) => stalks.push(Some(Arc::new(r))),
            Err(m) => {
                errors.push(m);
                stalks.push(None);
            }
        }
    }
    let index = |id: &str| ids.iter().position(|x| x == id);
    let mut pairs = Vec::new();
    let mut maps = Vec::new();
    for r in &doc.restrictions {
        let what = format!("restriction {} → {}", r.from, r.to);
        let (Some(a), Some(b)) = (index(&r.from), index(&r.to)) else {
            errors.push(format!("{what}: unknown element"));
            continue;
        };
        let (Some(sa), Some(sb)) = (&stalks[a], &stalks[b]) else { continue };
        match ring_map(sa, sb, &r.images, r.assumed, r.certificate.as_ref(), &what) {
            Ok(m) => {
                pairs.push((a, b));
                maps.push(((a, b), m));
            }
            Err(m) => errors.push(m),
        }
    }
    if !errors.is_empty() {
        return Err(WorkbenchError::Validation(errors));
    }
    let poset = Poset::from_relations(ids, &pairs)?;
    let mut space = RingedSpace::new(poset, stalks.into_iter().map(Option::unwrap).collect(), maps)?;
    if let Some(name) = doc.name {
        space.set_name(name);
    }
    Ok(space)
}

pub fn load_space(path: impl AsRef<Path>) -> Result<RingedSpace> {
    parse_space(&read(path.as_ref())?)
}

/// Canonical document: elements in index order, restrictions by `(from, to)` index, full certificates.
pub fn emit_space(space: &RingedSpace) -> String {
    let elements = (0..space.len())
        .map(|x| {
            let r = space.stalk(x);
            ElementDoc {
                id: space.id(x).to_string(),
                vars: r.vars().to_vec(),
                relations: r.relations().iter().map(|p| r.display(p)).collect(),
            }
        })
        .collect();
    let restrictions = space
        .restrictions()
        .map(|(&(x, y), m)| {
            let (a, b) = (m.source(), m.target());
            RestrictionDoc {
                from: space.id(x).to_string(),
                to: space.id(y).to_string(),
                images: m.images().iter().map(|p| b.display(p)).collect(),
                assumed: m.is_assumed(),
                certificate: m.certificate().map(|c| CertificateDoc {
                    witness: a.display(&c.witness),
                    inverse: Some(b.display(&c.inverse)),
                    sections: c.sections.iter().map(|s| SectionDoc(a.display(&s.numerator), s.power)).collect(),
                }),
            }
        })
        .collect();
    let doc = SpaceDoc { name: space.name().map(str::to_string), elements, restrictions };
    toml::to_string(&doc).expect("space documents serialize")
}

pub fn write_space(space: &RingedSpace, path: impl AsRef<Path>) -> Result<()> {
    fs::write(path.as_ref(), emit_space(space))
        .map_err(|e| WorkbenchError::Io(format!("{}: {e}", path.as_ref().display())))
}

fn resolve(base: &Path, rel: &str) -> PathBuf {
    let p = Path::new(rel);
    if p.is_absolute() {
        p.to_path_buf()
    } else {
        base.parent().unwrap_or(Path::new(".")).join(p)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ComapDoc {
    at: String,
    to: String,
    images: Vec<String>,
    #[serde(default)]
    assumed: bool,
    #[serde(default)]
    certificate: Option<CertificateDoc>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MorphismDoc {
    source: String,
    target: String,
    #[serde(default, rename = "comap")]
    comaps: Vec<ComapDoc>,
}

/// A morphism file names its source and target space files (relative to itself) and gives, per
/// source element, the target element and the images of the target stalk's variables.
pub fn load_morphism(path: impl AsRef<Path>) -> Result<SchematicMorphism> {
    let path = path.as_ref();
    let doc: MorphismDoc = toml::from_str(&read(path)?).map_err(toml_error)?;
    let source = Arc::new(load_space(resolve(path, &doc.source))?);
    let target = Arc::new(load_space(resolve(path, &doc.target))?);
    morphism_from_doc(&doc, source, target)
}

fn morphism_from_doc(
    doc: &MorphismDoc,
    source: Arc<RingedSpace>,
    target: Arc<RingedSpace>,
) -> Result<SchematicMorphism> {
    let mut assignment = vec![None; source.len()];
    let mut comaps = vec![None; source.len()];
    let mut errors = Vec::new();
    for c in &doc.comaps {
        let what = format!("comap at {}", c.at);
        let (x, y) = match (source.index_of(&c.at), target.index_of(&c.to)) {
            (Ok(x), Ok(y)) => (x, y),
            _ => {
                errors.push(format!("{what}: unknown element"));
                continue;
            }
        };
        match ring_map(target.stalk(y), source.stalk(x), &c.images, c.assumed, c.certificate.as_ref(), &what) {
            Ok(m) => {
                assignment[x] = Some(y);
                comaps[x] = Some(m);
            }
            Err(m) => errors.push(m),
        }
    }
    for x in 0..source.len() {
        if assignment[x].is_none() && !errors.iter().any(|e| e.starts_with(&format!("comap at {} ", source.id(x)))) {
            errors.push(format!("no comap at {}", source.id(x)));
        }
    }
    if !errors.is_empty() {
        return Err(WorkbenchError::Validation(errors));
    }
    SchematicMorphism::new(
        source,
        target,
        assignment.into_iter().map(Option::unwrap).collect(),
        comaps.into_iter().map(Option::unwrap).collect(),
    )
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct IndexDoc {
    id: String,
    space: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TransitionDoc {
    lower: String,
    upper: String,
    /// Morphism file from the upper space to the lower one.
    morphism: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DatumDoc {
    #[serde(rename = "index")]
    indices: Vec<IndexDoc>,
    #[serde(default, rename = "transition")]
    transitions: Vec<TransitionDoc>,
}

/// A datum file lists index elements with their space files and one transition per strict pair.
pub fn load_datum(path: impl AsRef<Path>) -> Result<Datum> {
    let path = path.as_ref();
    let doc: DatumDoc = toml::from_str(&read(path)?).map_err(toml_error)?;
    let ids: Vec<String> = doc.indices.iter().map(|i| i.id.clone()).collect();
    let mut cache: BTreeMap<PathBuf, Arc<RingedSpace>> = BTreeMap::new();
    let mut load = |rel: &str| -> Result<Arc<RingedSpace>> {
        let p = resolve(path, rel);
        if let Some(s) = cache.get(&p) {
            return Ok(s.clone());
        }
        let s = Arc::new(load_space(&p)?);
        cache.insert(p, s.clone());
        Ok(s)
    };
    let spaces = doc.indices.iter().map(|i| load(&i.space)).collect::<Result<Vec<_>>>()?;
    let find =
        |id: &str| ids.iter().position(|x| x == id).ok_or_else(|| WorkbenchError::ElementNotFound(id.to_string()));
    let mut pairs = Vec::new();
    let mut transitions = Vec::new();
    for t in &doc.transitions {
        let (p, q) = (find(&t.lower)?, find(&t.upper)?);
        let mpath = resolve(path, &t.morphism);
        let mdoc: MorphismDoc = toml::from_str(&read(&mpath)?).map_err(toml_error)?;
        let m = morphism_from_doc(&mdoc, spaces[q].clone(), spaces[p].clone())?;
        pairs.push((p, q));
        transitions.push(((p, q), m));
    }
    let index = Poset::from_relations(ids, &pairs)?;
    Datum::new(index, spaces, transitions)
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
struct StalkDoc {
    id: String,
    dim: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
struct MapDoc {
    from: String,
    to: String,
    rows: Vec<Vec<String>>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
struct DiagramDoc {
    #[serde(default, rename = "stalk")]
    stalks: Vec<StalkDoc>,
    #[serde(default, rename = "map", skip_serializing_if = "Vec::is_empty")]
    maps: Vec<MapDoc>,
}

fn parse_q(s: &str) -> Option<Q> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let d: num::BigInt = d.trim().parse().ok()?;
            if d == num::BigInt::from(0) {
                return None;
            }
            Some(Q::new(n.trim().parse().ok()?, d))
        }
        None => Some(Q::from_integer(s.parse().ok()?)),
    }
}

/// A diagram over the given poset: unlisted elements have dimension 0 and maps touching a zero
/// space may be omitted.
pub fn parse_diagram(text: &str, poset: &Poset) -> Result<FiniteDiagram> {
    let doc: DiagramDoc = toml::from_str(text).map_err(toml_error)?;
    let mut dims = vec![0; poset.len()];
    let mut errors = Vec::new();
    for s in &doc.stalks {
        match poset.index_of(&s.id) {
            Ok(x) => dims[x] = s.dim,
            Err(_) => errors.push(format!("unknown element {}", s.id)),
        }
    }
    let mut maps = BTreeMap::new();
    for m in &doc.maps {
        let what = format!("map {} → {}", m.from, m.to);
        let (Ok(x), Ok(y)) = (poset.index_of(&m.from), poset.index_of(&m.to)) else {
            errors.push(format!("{what}: unknown element"));
            continue;
        };
        let entries: Option<Vec<Vec<Q>>> = m.rows.iter().map(|r| r.iter().map(|v| parse_q(v)).collect()).collect();
        match entries {
            Some(rows) if rows.len() == dims[y] && rows.iter().all(|r| r.len() == dims[x]) => {
                let mut mat = Matrix::zeros(dims[y], dims[x]);
                for (i, r) in rows.into_iter().enumerate() {
                    for (j, v) in r.into_iter().enumerate() {
                        mat.set(i, j, v);
                    }
                }
                maps.insert((x, y), mat);
            }
            Some(_) => errors.push(format!("{what}: expected {}×{} entries", dims[y], dims[x])),
            None => errors.push(format!("{what}: malformed rational entry")),
        }
    }
    for (x, y) in poset.cover_relations() {
        if !maps.contains_key(&(x, y)) && (dims[x] == 0 || dims[y] == 0) {
            maps.insert((x, y), Matrix::zeros(dims[y], dims[x]));
        }
    }
    if !errors.is_empty() {
        return Err(WorkbenchError::Validation(errors));
    }
    FiniteDiagram::new(poset.clone(), dims, maps.into_iter().collect())
}

pub fn load_diagram(path: impl AsRef<Path>, poset: &Poset) -> Result<FiniteDiagram> {
    parse_diagram(&read(path.as_ref())?, poset)
}

pub fn emit_diagram(d: &FiniteDiagram) -> String {
    let p = d.poset();
    let stalks =
        (0..p.len()).filter(|&x| d.dim(x) > 0).map(|x| StalkDoc { id: p.id(x).to_string(), dim: d.dim(x) }).collect();
    let maps = d
        .cover_maps()
        .filter(|(_, m)| m.rows() > 0 && m.cols() > 0)
        .map(|(&(x, y), m)| MapDoc {
            from: p.id(x).to_string(),
            to: p.id(y).to_string(),
            rows: (0..m.rows()).map(|i| (0..m.cols()).map(|j| fmt_rational(m.get(i, j))).collect()).collect(),
        })
        .collect();
    toml::to_string(&DiagramDoc { stalks, maps }).expect("diagram documents serialize")
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct BaseDoc {
    element: String,
    #[serde(default)]
    images: Vec<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PointDoc {
    carrier: String,
    images: Vec<String>,
    #[serde(default)]
    base: Option<BaseDoc>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SuiteDoc {
    #[serde(rename = "point")]
    points: Vec<PointDoc>,
}

/// Σ-points on the source of `f`, images written as rational functions in `t`.
pub fn parse_suite(text: &str, f: &SchematicMorphism) -> Result<Vec<SigmaPoint>> {
    let doc: SuiteDoc = toml::from_str(text).map_err(toml_error)?;
    let (x, y) = (f.source(), f.target());
    let rfs = |v: &[String]| v.iter().map(|s| RationalFunction::parse(s)).collect::<Result<Vec<_>>>();
    doc.points
        .iter()
        .map(|p| {
            let carrier = x.index_of(&p.carrier)?;
            let mut s = SigmaPoint::new(x, carrier, rfs(&p.images)?)?;
            if let Some(b) = &p.base {
                s = s.with_base(BaseData { element: y.index_of(&b.element)?, images: rfs(&b.images)? });
            }
            Ok(s)
        })
        .collect()
}

pub fn load_suite(path: impl AsRef<Path>, f: &SchematicMorphism) -> Result<Vec<SigmaPoint>> {
    parse_suite(&read(path.as_ref())?, f)
}

/// `u`: elements of `X` whose up-sets form the covering; `v`: chart elements of `X` used for the
/// refinements of each `U_i ×_Y X`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct CoversDoc {
    pub u: Vec<String>,
    pub v: Vec<String>,
}

pub fn load_covers(path: impl AsRef<Path>) -> Result<CoversDoc> {
    toml::from_str(&read(path.as_ref())?).map_err(toml_error)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spaces::builders::*;
    use crate::spaces::validate_space;

    #[test]
    fn space_round_trip() {
        let x = build_p1_model();
        let text = emit_space(&x);
        let y = parse_space(&text).unwrap();
        assert_eq!(emit_space(&y), text);
        assert!(validate_space(&y).pseudoschematic);
    }

    #[test]
    fn witness_only_certificates_are_completed() {
        let text = r#"
[[element]]
id = "a"
vars = ["x"]

[[element]]
id = "b"
vars = ["x", "w"]
relations = ["x*w - 1"]

[[restriction]]
from = "a"
to = "b"
images = ["x"]
certificate = { witness = "x" }
"#;
        let s = parse_space(text).unwrap();
        let c = s.restriction(0, 1).unwrap().certificate().unwrap();
        assert_eq!(s.stalk(1).display(&c.inverse), "w");
    }

    #[test]
    fn errors_are_collected() {
        let text = r#"
[[element]]
id = "a"
vars = ["x"]
relations = ["x + q"]

[[element]]
id = "b"
vars = ["y"]

[[restriction]]
from = "b"
to = "c"
images = ["y"]
"#;
        match parse_space(text) {
            Err(WorkbenchError::Validation(v)) => {
                assert_eq!(v.len(), 2);
                assert!(v[0].contains("element a") && v[0].contains("`q`"));
                assert!(v[1].contains("b → c"));
            }
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse_space("[[element]\nid=1"), Err(WorkbenchError::Parse { .. })));
    }

    #[test]
    fn diagram_round_trip() {
        let d = crate::cohomology::twist_slice_diagram(1, -2, 2).unwrap();
        let text = emit_diagram(&d);
        let e = parse_diagram(&text, d.poset()).unwrap();
        assert_eq!(emit_diagram(&e), text);
        assert_eq!(e.dims(), d.dims());
    }
}

//! JSON presentations of the algebraic objects, with loading, validation and
//! canonical re-serialization.

use std::collections::BTreeMap;
use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use twist_core::coalgebra::{validate_coalgebra, DgCoalgebra, DgCoalgebraData, DgModule, DgModuleData};
use twist_core::dga::{validate_dga, DgAlgebra, DgaData};
use twist_core::dgl::{validate_dgl, DgLieAlgebra, DglData};
use twist_core::hochschild::AssocAlgebra;
use twist_core::{BasisElement, GradedModule, Ring, Scalar, Vector};

use crate::elements::{format_element, parse_element};
use crate::CliError;

pub const FORMAT_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Dga,
    Dgl,
    Coalgebra,
    Assoc,
    Module,
}

impl Kind {
    pub fn as_str(&self) -> &'static str {
        match self {
            Kind::Dga => "dga",
            Kind::Dgl => "dgl",
            Kind::Coalgebra => "coalgebra",
            Kind::Assoc => "assoc",
            Kind::Module => "module",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BasisEntry {
    pub name: String,
    pub degree: i32,
}

/// An exact coefficient: a JSON integer or a string in the scalar ring's
/// own syntax. Floats do not deserialize.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Coeff {
    Int(i64),
    Text(String),
}

impl Coeff {
    fn parse(&self, ring: &Ring) -> Result<Scalar, CliError> {
        match self {
            Coeff::Int(n) => Ok(ring.from_i64(*n)),
            Coeff::Text(s) => Ok(ring.parse_scalar(s)?),
        }
    }

    fn of(c: &Scalar) -> Coeff {
        match c.as_u64() {
            Some(v) if matches!(c.ring(), Ring::Prime(_)) => Coeff::Int(v as i64),
            _ => Coeff::Text(c.to_string()),
        }
    }
}

/// On-disk presentation. `structure` rows are `[x, y, z, c]` meaning
/// `x·y ∋ c z` (product or bracket), `Δx ∋ c y⊗z` (coproduct) or
/// `x·y ∋ c z` for an algebra element `x` acting on a module element `y`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PresentationFile {
    pub version: u32,
    pub scalars: String,
    pub kind: Kind,
    pub basis: Vec<BasisEntry>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub differential: Vec<(String, String, Coeff)>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub structure: Vec<(String, String, String, Coeff)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub unit: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub counit: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coaugmentation: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cocommutative: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub algebra: Option<Box<PresentationFile>>,
}

/// A validated object of one of the supported kinds.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Loaded {
    Dga(DgAlgebra),
    Dgl(DgLieAlgebra),
    Coalgebra(DgCoalgebra),
    Assoc(AssocAlgebra),
    Module(DgModule),
}

impl Loaded {
    pub fn kind(&self) -> Kind {
        match self {
            Loaded::Dga(_) => Kind::Dga,
            Loaded::Dgl(_) => Kind::Dgl,
            Loaded::Coalgebra(_) => Kind::Coalgebra,
            Loaded::Assoc(_) => Kind::Assoc,
            Loaded::Module(_) => Kind::Module,
        }
    }

    pub fn module(&self) -> &Arc<GradedModule> {
        match self {
            Loaded::Dga(a) => a.module(),
            Loaded::Dgl(l) => l.module(),
            Loaded::Coalgebra(c) => c.module(),
            Loaded::Assoc(b) => b.module(),
            Loaded::Module(m) => m.module(),
        }
    }
}

pub fn read_file(path: &Path) -> Result<PresentationFile, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    parse_presentation(&text)
}

pub fn parse_presentation(text: &str) -> Result<PresentationFile, CliError> {
    serde_json::from_str(text).map_err(|e| CliError::Presentation(format!("malformed presentation: {e}")))
}

pub fn load(path: &Path) -> Result<Loaded, CliError> {
    build(&read_file(path)?)
}

/// Pretty JSON with a trailing newline, as written by `validate --emit canonical`.
pub fn to_json(p: &PresentationFile) -> String {
    crate::to_pretty(&serde_json::to_value(p).expect("presentations serialize"))
}

fn module_of(p: &PresentationFile) -> Result<(Ring, Arc<GradedModule>), CliError> {
    if p.version != FORMAT_VERSION {
        return Err(CliError::Presentation(format!("unsupported format version {}", p.version)));
    }
    let ring = Ring::parse_descriptor(&p.scalars)?;
    let basis = p.basis.iter().map(|b| BasisElement::new(b.name.clone(), b.degree)).collect();
    Ok((ring.clone(), Arc::new(GradedModule::new(ring, basis)?)))
}

fn index(m: &GradedModule, name: &str, role: &str) -> Result<usize, CliError> {
    m.find(name).ok_or_else(|| CliError::Presentation(format!("{role} refers to unknown basis element `{name}`")))
}

fn forbid(p: &PresentationFile, fields: &[(&str, bool)]) -> Result<(), CliError> {
    for (name, present) in fields {
        if *present {
            return Err(CliError::Presentation(format!("field `{name}` does not apply to kind {}", p.kind.as_str())));
        }
    }
    Ok(())
}

fn differential(p: &PresentationFile, m: &GradedModule, ring: &Ring) -> Result<Vec<Vector>, CliError> {
    let mut images = vec![m.zero(); m.dim()];
    let mut seen = std::collections::BTreeSet::new();
    for (x, y, c) in &p.differential {
        let (i, j) = (index(m, x, "differential")?, index(m, y, "differential")?);
        if !seen.insert((i, j)) {
            return Err(CliError::Presentation(format!("differential entry ({x}, {y}) repeated")));
        }
        images[i][j] = c.parse(ring)?;
    }
    Ok(images)
}

/// Structure rows grouped by their first two entries.
fn table(
    p: &PresentationFile,
    first: &GradedModule,
    second: &GradedModule,
    out: &GradedModule,
    ring: &Ring,
) -> Result<BTreeMap<(usize, usize), Vector>, CliError> {
    let mut t: BTreeMap<(usize, usize), Vector> = BTreeMap::new();
    let mut seen = std::collections::BTreeSet::new();
    for (x, y, z, c) in &p.structure {
        let key = (index(first, x, "structure")?, index(second, y, "structure")?);
        let k = index(out, z, "structure")?;
        if !seen.insert((key, k)) {
            return Err(CliError::Presentation(format!("structure entry ({x}, {y}, {z}) repeated")));
        }
        t.entry(key).or_insert_with(|| out.zero())[k] = c.parse(ring)?;
    }
    Ok(t)
}

fn dga_data(p: &PresentationFile, ring: &Ring, m: &Arc<GradedModule>) -> Result<DgaData, CliError> {
    forbid(p, &[("counit", p.counit.is_some()), ("coaugmentation", p.coaugmentation.is_some())])?;
    forbid(p, &[("cocommutative", p.cocommutative.is_some()), ("algebra", p.algebra.is_some())])?;
    let unit_text = p.unit.as_deref().ok_or_else(|| CliError::Presentation("an algebra needs a `unit`".into()))?;
    let unit = parse_element(m, unit_text)?;
    let mut data = match m.find(unit_text.trim()) {
        Some(u) => DgaData::with_unit_basis(m.clone(), m.name(u))?,
        None => DgaData::new(m.clone(), unit),
    };
    data.differential = differential(p, m, ring)?;
    for ((i, j), v) in table(p, m, m, m, ring)? {
        data.product[i * m.dim() + j] = v;
    }
    Ok(data)
}

fn dgl_data(p: &PresentationFile, ring: &Ring, m: &Arc<GradedModule>) -> Result<DglData, CliError> {
    forbid(p, &[("unit", p.unit.is_some()), ("counit", p.counit.is_some())])?;
    forbid(p, &[("coaugmentation", p.coaugmentation.is_some()), ("cocommutative", p.cocommutative.is_some())])?;
    forbid(p, &[("algebra", p.algebra.is_some())])?;
    let mut data = DglData::new(m.clone());
    data.differential = differential(p, m, ring)?;
    let t = table(p, m, m, m, ring)?;
    // A listed [x,y] implies [y,x] by antisymmetry unless [y,x] is listed too.
    for (&(i, j), v) in &t {
        if !t.contains_key(&(j, i)) {
            data.set_bracket(m.name(i), m.name(j), v.clone())?;
        }
    }
    for (&(i, j), v) in &t {
        data.bracket[i * m.dim() + j] = v.clone();
    }
    Ok(data)
}

fn coalgebra_data(p: &PresentationFile, ring: &Ring, m: &Arc<GradedModule>) -> Result<DgCoalgebraData, CliError> {
    forbid(p, &[("unit", p.unit.is_some()), ("algebra", p.algebra.is_some())])?;
    let counit = p.counit.as_deref().ok_or_else(|| CliError::Presentation("a coalgebra needs a `counit`".into()))?;
    let coaug = p
        .coaugmentation
        .as_deref()
        .ok_or_else(|| CliError::Presentation("a coalgebra needs a `coaugmentation`".into()))?;
    let mut coproduct = vec![Vec::new(); m.dim()];
    let mut seen = std::collections::BTreeSet::new();
    for (x, l, r, c) in &p.structure {
        let (i, j, k) = (index(m, x, "coproduct")?, index(m, l, "coproduct")?, index(m, r, "coproduct")?);
        if !seen.insert((i, j, k)) {
            return Err(CliError::Presentation(format!("coproduct entry ({x}, {l}, {r}) repeated")));
        }
        let c = c.parse(ring)?;
        if !c.is_zero() {
            coproduct[i].push((j, k, c));
        }
    }
    for terms in &mut coproduct {
        terms.sort_by_key(|&(j, k, _)| (j, k));
    }
    Ok(DgCoalgebraData {
        module: m.clone(),
        differential: differential(p, m, ring)?,
        coproduct,
        counit: parse_element(m, counit)?.into_coeffs(),
        coaugmentation: parse_element(m, coaug)?,
        cocommutative: p.cocommutative.unwrap_or(false),
    })
}

/// Parses references and coefficients, then runs the validator of the
/// declared kind.
pub fn build(p: &PresentationFile) -> Result<Loaded, CliError> {
    let (ring, m) = module_of(p)?;
    match p.kind {
        Kind::Dga => Ok(Loaded::Dga(validate_dga(&dga_data(p, &ring, &m)?)?)),
        Kind::Assoc => {
            let a = validate_dga(&dga_data(p, &ring, &m)?)?;
            Ok(Loaded::Assoc(AssocAlgebra::new(a)?))
        }
        Kind::Dgl => Ok(Loaded::Dgl(validate_dgl(&dgl_data(p, &ring, &m)?)?)),
        Kind::Coalgebra => Ok(Loaded::Coalgebra(validate_coalgebra(&coalgebra_data(p, &ring, &m)?)?)),
        Kind::Module => {
            forbid(p, &[("unit", p.unit.is_some()), ("counit", p.counit.is_some())])?;
            forbid(p, &[("coaugmentation", p.coaugmentation.is_some()), ("cocommutative", p.cocommutative.is_some())])?;
            let inner =
                p.algebra.as_deref().ok_or_else(|| CliError::Presentation("a module needs an `algebra`".into()))?;
            if inner.kind != Kind::Dga {
                return Err(CliError::Presentation("the algebra of a module must have kind dga".into()));
            }
            let Loaded::Dga(a) = build(inner)? else { unreachable!("kind checked") };
            if a.ring() != &ring {
                return Err(CliError::Presentation("module and algebra over different scalars".into()));
            }
            let mut action = vec![m.zero(); a.dim() * m.dim()];
            for ((i, j), v) in table(p, a.module(), &m, &m, &ring)? {
                action[i * m.dim() + j] = v;
            }
            let data =
                DgModuleData { algebra: a, module: m.clone(), differential: differential(p, &m, &ring)?, action };
            Ok(Loaded::Module(data.validate()?))
        }
    }
}

fn header(kind: Kind, m: &GradedModule) -> PresentationFile {
    PresentationFile {
        version: FORMAT_VERSION,
        scalars: m.ring().descriptor(),
        kind,
        basis: m.basis().iter().map(|b| BasisEntry { name: b.name.clone(), degree: b.degree }).collect(),
        differential: Vec::new(),
        structure: Vec::new(),
        unit: None,
        counit: None,
        coaugmentation: None,
        cocommutative: None,
        algebra: None,
    }
}

fn differential_rows(m: &GradedModule, images: &[Vector]) -> Vec<(String, String, Coeff)> {
    let mut rows = Vec::new();
    for (i, v) in images.iter().enumerate() {
        for (j, c) in v.support() {
            rows.push((m.name(i).to_string(), m.name(j).to_string(), Coeff::of(c)));
        }
    }
    rows
}

fn push_rows(rows: &mut Vec<(String, String, String, Coeff)>, x: &str, y: &str, out: &GradedModule, v: &Vector) {
    for (k, c) in v.support() {
        rows.push((x.to_string(), y.to_string(), out.name(k).to_string(), Coeff::of(c)));
    }
}

fn dga_presentation(kind: Kind, a: &DgAlgebra) -> PresentationFile {
    let m = a.module();
    let n = m.dim();
    let mut p = header(kind, m);
    let data = a.to_data();
    p.differential = differential_rows(m, &data.differential);
    let unit_basis = (0..n).find(|&u| *a.unit() == m.basis_vector(u));
    p.unit = Some(format_element(m, a.unit()));
    for i in 0..n {
        for j in 0..n {
            let v = &data.product[i * n + j];
            // The unit law is implied when the unit is a basis element.
            if let Some(u) = unit_basis {
                if (i == u || j == u) && *v == m.basis_vector(if i == u { j } else { i }) {
                    continue;
                }
            }
            push_rows(&mut p.structure, m.name(i), m.name(j), m, v);
        }
    }
    p
}

/// Canonical presentation of a validated object. Building it again gives
/// back an equal object.
pub fn to_presentation(obj: &Loaded) -> PresentationFile {
    match obj {
        Loaded::Dga(a) => dga_presentation(Kind::Dga, a),
        Loaded::Assoc(b) => dga_presentation(Kind::Assoc, b.dga()),
        Loaded::Dgl(l) => {
            let m = l.module();
            let mut p = header(Kind::Dgl, m);
            p.differential = differential_rows(m, &l.to_data().differential);
            for i in 0..m.dim() {
                for j in i..m.dim() {
                    push_rows(&mut p.structure, m.name(i), m.name(j), m, &l.bracket_of_basis(i, j));
                }
            }
            p
        }
        Loaded::Coalgebra(c) => {
            let m = c.module();
            let data = c.to_data();
            let mut p = header(Kind::Coalgebra, m);
            p.differential = differential_rows(m, &data.differential);
            for (i, terms) in data.coproduct.iter().enumerate() {
                for (j, k, x) in terms {
                    p.structure.push((
                        m.name(i).to_string(),
                        m.name(*j).to_string(),
                        m.name(*k).to_string(),
                        Coeff::of(x),
                    ));
                }
            }
            p.counit = Some(format_element(m, &Vector::from_coeffs(data.counit.clone())));
            p.coaugmentation = Some(format_element(m, &data.coaugmentation));
            p.cocommutative = Some(data.cocommutative);
            p
        }
        Loaded::Module(md) => {
            let m = md.module();
            let a = md.algebra();
            let mut p = header(Kind::Module, m);
            p.differential =
                differential_rows(m, &(0..m.dim()).map(|i| md.differential().image(i)).collect::<Vec<_>>());
            for i in 0..a.dim() {
                for j in 0..m.dim() {
                    let v = md.act(&a.module().basis_vector(i), &m.basis_vector(j));
                    push_rows(&mut p.structure, a.module().name(i), m.name(j), m, &v);
                }
            }
            p.algebra = Some(Box::new(dga_presentation(Kind::Dga, a)));
            p
        }
    }
}

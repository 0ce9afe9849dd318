//! Instance-file schema: JSON documents with exact-string rationals.
//!
//! Every rational is serialized as the ASCII string `"p/q"` (or `"p"` when
//! the denominator is 1) and cyclotomic values as
//! `{"order": n, "coeffs": ["p/q", ...]}` on the power basis; numeric JSON
//! literals are never used for non-integers, so parsing loses nothing.

use std::collections::BTreeMap;
use std::str::FromStr;
use std::sync::Arc;

use anyhow::{anyhow, bail, Context, Result};
use serde::{Deserialize, Serialize};

use artin_core::characters::{Character, ClassFunction};
use artin_core::exactnum::{euler_phi, Cyclotomic, Rational};
use artin_core::groups::FiniteGroup;
use artin_core::linalg::Matrix;
use artin_core::ramification::RamifiedGroup;
use artin_core::weildeligne::{Frobenius, MatrixRep, WeilDeligneRep};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Kind {
    Filtration,
    Character,
    Wd,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Preset {
    Cyclic,
    UnitsMod,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GroupDoc {
    Preset { preset: Preset, param: u64 },
    Table { size: usize, mul: Vec<Vec<usize>>, #[serde(default)] labels: Option<Vec<String>> },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ValueDoc {
    Rational(String),
    Cyclotomic { order: u64, coeffs: Vec<String> },
}

pub type MatrixDoc = Vec<Vec<ValueDoc>>;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FrobeniusDoc {
    #[serde(rename = "F")]
    pub f: MatrixDoc,
    pub theta: Vec<usize>,
}

/// The on-disk instance document. `kind` decides which optional sections
/// must be present.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceDoc {
    pub schema_version: u32,
    pub kind: Kind,
    pub group: GroupDoc,
    pub chain: Vec<Vec<usize>>,
    pub realizable: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub values: Option<Vec<ValueDoc>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dim: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mats: Option<BTreeMap<String, MatrixDoc>>,
    #[serde(default, skip_serializing_if = "Option::is_none", rename = "N")]
    pub monodromy: Option<MatrixDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub frobenius: Option<FrobeniusDoc>,
}

/// A parsed and fully validated instance.
#[derive(Debug)]
pub enum Instance {
    Filtration(Arc<RamifiedGroup>),
    Character(Arc<RamifiedGroup>, Character),
    Wd(WeilDeligneRep),
}

impl Instance {
    pub fn rg(&self) -> &Arc<RamifiedGroup> {
        match self {
            Instance::Filtration(rg) => rg,
            Instance::Character(rg, _) => rg,
            Instance::Wd(wd) => wd.rg(),
        }
    }

    pub fn kind(&self) -> Kind {
        match self {
            Instance::Filtration(_) => Kind::Filtration,
            Instance::Character(_, _) => Kind::Character,
            Instance::Wd(_) => Kind::Wd,
        }
    }
}

fn parse_rational(s: &str) -> Result<Rational> {
    Rational::from_str(s.trim()).map_err(|e| anyhow!("invalid rational {s:?}: {e}"))
}

fn parse_value(v: &ValueDoc) -> Result<Cyclotomic> {
    match v {
        ValueDoc::Rational(s) => Ok(Cyclotomic::from_rational(1, parse_rational(s)?)),
        ValueDoc::Cyclotomic { order, coeffs } => {
            if *order == 0 {
                bail!("cyclotomic order must be positive");
            }
            let expected = euler_phi(*order) as usize;
            if coeffs.len() != expected {
                bail!(
                    "cyclotomic value of order {order} needs phi({order}) = {expected} coefficients, got {}",
                    coeffs.len()
                );
            }
            let coeffs = coeffs.iter().map(|s| parse_rational(s)).collect::<Result<Vec<_>>>()?;
            Ok(Cyclotomic::from_poly(*order, coeffs)?)
        }
    }
}

fn value_to_doc(c: &Cyclotomic) -> ValueDoc {
    if c.order() == 1 {
        ValueDoc::Rational(c.coeffs()[0].to_string())
    } else {
        ValueDoc::Cyclotomic {
            order: c.order(),
            coeffs: c.coeffs().iter().map(|r| r.to_string()).collect(),
        }
    }
}

fn parse_matrix(doc: &MatrixDoc, dim: usize, what: &str) -> Result<Matrix> {
    if doc.len() != dim || doc.iter().any(|row| row.len() != dim) {
        bail!("{what} must be a {dim}x{dim} matrix");
    }
    let entries = doc
        .iter()
        .flatten()
        .map(parse_value)
        .collect::<Result<Vec<_>>>()
        .with_context(|| format!("in {what}"))?;
    Ok(Matrix::new(dim, dim, entries)?)
}

fn matrix_to_doc(m: &Matrix) -> MatrixDoc {
    (0..m.rows())
        .map(|i| (0..m.cols()).map(|j| value_to_doc(m.at(i, j))).collect())
        .collect()
}

fn build_group(doc: &GroupDoc) -> Result<FiniteGroup> {
    match doc {
        GroupDoc::Preset { preset: Preset::Cyclic, param } => {
            if *param == 0 {
                bail!("cyclic preset needs a positive parameter");
            }
            Ok(FiniteGroup::cyclic(*param as usize))
        }
        GroupDoc::Preset { preset: Preset::UnitsMod, param } => {
            Ok(FiniteGroup::unit_group_mod(*param)?)
        }
        GroupDoc::Table { size, mul, labels } => {
            if mul.len() != *size {
                bail!("group table has {} rows, declared size {size}", mul.len());
            }
            if let Some(l) = labels {
                if l.len() != *size {
                    bail!("group has {} labels, declared size {size}", l.len());
                }
            }
            Ok(FiniteGroup::from_table(mul.clone(), labels.clone())?)
        }
    }
}

fn build_ramified_group(doc: &InstanceDoc) -> Result<Arc<RamifiedGroup>> {
    let group = build_group(&doc.group)?;
    let chain = doc
        .chain
        .iter()
        .enumerate()
        .map(|(i, elems)| {
            group
                .subgroup_from_elements(elems)
                .with_context(|| format!("chain entry {i} is not a subgroup"))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Arc::new(RamifiedGroup::new(group, chain, doc.realizable)?))
}

/// Parse and validate an instance document, reporting the first failing
/// invariant.
pub fn parse_instance(text: &str) -> Result<Instance> {
    let doc: InstanceDoc = serde_json::from_str(text).context("malformed instance document")?;
    if doc.schema_version != SCHEMA_VERSION {
        bail!(
            "unknown schema_version {} (this build reads version {SCHEMA_VERSION})",
            doc.schema_version
        );
    }
    let rg = build_ramified_group(&doc)?;
    fn ensure_absent<T>(field: &Option<T>, name: &str, kind: &str) -> Result<()> {
        if field.is_some() {
            bail!("field {name:?} is not allowed in a {kind} instance");
        }
        Ok(())
    }
    match doc.kind {
        Kind::Filtration => {
            ensure_absent(&doc.values, "values", "filtration")?;
            ensure_absent(&doc.mats, "mats", "filtration")?;
            ensure_absent(&doc.monodromy, "N", "filtration")?;
            ensure_absent(&doc.frobenius, "frobenius", "filtration")?;
            Ok(Instance::Filtration(rg))
        }
        Kind::Character => {
            ensure_absent(&doc.mats, "mats", "character")?;
            ensure_absent(&doc.monodromy, "N", "character")?;
            ensure_absent(&doc.frobenius, "frobenius", "character")?;
            let values = doc
                .values
                .as_ref()
                .ok_or_else(|| anyhow!("character instance needs a \"values\" array"))?;
            if values.len() != rg.group().size() {
                bail!(
                    "expected one value per group element ({}), got {}",
                    rg.group().size(),
                    values.len()
                );
            }
            let values = values.iter().map(parse_value).collect::<Result<Vec<_>>>()?;
            let chi = Character::new(ClassFunction::from_element_values(rg.clone(), values)?)?;
            Ok(Instance::Character(rg, chi))
        }
        Kind::Wd => {
            ensure_absent(&doc.values, "values", "wd")?;
            let dim = doc.dim.ok_or_else(|| anyhow!("wd instance needs \"dim\""))?;
            if dim == 0 {
                bail!("wd dimension must be positive");
            }
            let mats_doc =
                doc.mats.as_ref().ok_or_else(|| anyhow!("wd instance needs \"mats\""))?;
            let size = rg.group().size();
            let mut mats = Vec::with_capacity(size);
            for g in 0..size {
                let key = g.to_string();
                let m = mats_doc
                    .get(&key)
                    .ok_or_else(|| anyhow!("mats is missing the matrix for element {g}"))?;
                mats.push(parse_matrix(m, dim, &format!("mats[{g}]"))?);
            }
            if mats_doc.len() != size {
                bail!("mats has {} entries, expected {}", mats_doc.len(), size);
            }
            let monodromy = parse_matrix(
                doc.monodromy.as_ref().ok_or_else(|| anyhow!("wd instance needs \"N\""))?,
                dim,
                "N",
            )?;
            let q = doc.q.ok_or_else(|| anyhow!("wd instance needs \"q\""))?;
            let frobenius = doc
                .frobenius
                .as_ref()
                .map(|f| -> Result<Frobenius> {
                    Ok(Frobenius { matrix: parse_matrix(&f.f, dim, "F")?, theta: f.theta.clone() })
                })
                .transpose()?;
            let rep = MatrixRep::new(rg, mats)?;
            Ok(Instance::Wd(WeilDeligneRep::new(rep, monodromy, q, frobenius)?))
        }
    }
}

fn group_to_doc(group: &FiniteGroup, preset: Option<(Preset, u64)>) -> GroupDoc {
    match preset {
        Some((preset, param)) => GroupDoc::Preset { preset, param },
        None => GroupDoc::Table {
            size: group.size(),
            mul: group.table_rows(),
            labels: group.labels().map(<[String]>::to_vec),
        },
    }
}

fn base_doc(rg: &RamifiedGroup, kind: Kind, preset: Option<(Preset, u64)>) -> InstanceDoc {
    InstanceDoc {
        schema_version: SCHEMA_VERSION,
        kind,
        group: group_to_doc(rg.group(), preset),
        chain: rg.chain().iter().map(|h| h.elements().to_vec()).collect(),
        realizable: rg.realizable(),
        values: None,
        dim: None,
        mats: None,
        monodromy: None,
        q: None,
        frobenius: None,
    }
}

pub fn filtration_doc(rg: &RamifiedGroup, preset: Option<(Preset, u64)>) -> InstanceDoc {
    base_doc(rg, Kind::Filtration, preset)
}

pub fn character_doc(
    rg: &RamifiedGroup,
    chi: &Character,
    preset: Option<(Preset, u64)>,
) -> InstanceDoc {
    let mut doc = base_doc(rg, Kind::Character, preset);
    doc.values = Some(
        (0..rg.group().size())
            .map(|g| value_to_doc(chi.value_at(g)))
            .collect(),
    );
    doc
}

pub fn wd_doc(wd: &WeilDeligneRep, preset: Option<(Preset, u64)>) -> InstanceDoc {
    let mut doc = base_doc(wd.rg(), Kind::Wd, preset);
    doc.dim = Some(wd.dim());
    doc.mats = Some(
        (0..wd.rg().group().size())
            .map(|g| (g.to_string(), matrix_to_doc(wd.rep().matrix(g))))
            .collect(),
    );
    doc.monodromy = Some(matrix_to_doc(wd.monodromy()));
    doc.q = Some(wd.q());
    doc.frobenius = wd.frobenius().map(|f| FrobeniusDoc {
        f: matrix_to_doc(&f.matrix),
        theta: f.theta.clone(),
    });
    doc
}

pub fn render_doc(doc: &InstanceDoc) -> String {
    let mut text = serde_json::to_string_pretty(doc).expect("schema types serialize");
    text.push('\n');
    text
}

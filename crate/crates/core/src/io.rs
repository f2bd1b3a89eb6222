//! JSON documents for cones, tuples, proofs and witnesses.
//!
//! Every rational is a string `"p/q"`, or `"p"` when `q = 1`. Decimal input
//! such as `"0.25"` is accepted and read exactly.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::exact::{format_rat, parse_rat, Rat, RatMatrix, RatVector, Sym2};
use crate::nc_sets::{MatTuple, PtDecomposition, SepCertificate};
use crate::polyhedral::{rays_of, HRep, LinearIso, VRep};
use crate::witness::{TrailStep, WitnessResult};

pub const KIND_TUPLE: &str = "tuple";
pub const KIND_DECOMPOSITION: &str = "pt_decomposition";
pub const KIND_CERTIFICATE: &str = "sep_certificate";
pub const KIND_WITNESS: &str = "witness";

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConeDoc {
    pub dim: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generators: Option<Vec<Vec<String>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub functionals: Option<Vec<Vec<String>>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EntryDoc {
    pub a11: String,
    pub a12: String,
    pub a22: String,
}

/// Tuples, decompositions and certificates share this shape. A proof may
/// carry the tuple it is about, so it can be re-checked on its own.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TupleDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kind: Option<String>,
    pub dim: usize,
    pub entries: Vec<EntryDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tuple: Option<Box<TupleDoc>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "step", rename_all = "snake_case")]
pub enum StepDoc {
    Base3,
    FacetLift { index: usize, iso: Vec<Vec<String>> },
    VertexFigureLift { index: usize, iso: Vec<Vec<String>> },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessDoc {
    pub kind: String,
    pub tuple: TupleDoc,
    pub certificate: TupleDoc,
    pub trail: Vec<StepDoc>,
}

/// Any document `verify` accepts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ProofFile {
    Witness(WitnessResult),
    Decomposition { tuple: MatTuple, decomposition: PtDecomposition },
    Certificate { tuple: MatTuple, certificate: SepCertificate },
}

fn parse_err(e: serde_json::Error) -> Error {
    Error::Parse(e.to_string())
}

fn rats(row: &[String]) -> Result<RatVector> {
    row.iter().map(|s| parse_rat(s)).collect()
}

fn strings(row: &[Rat]) -> Vec<String> {
    row.iter().map(format_rat).collect()
}

fn rows(dim: usize, rs: &[Vec<String>], what: &str) -> Result<Vec<RatVector>> {
    rs.iter()
        .map(|r| {
            if r.len() != dim {
                return Err(Error::Parse(format!("{what} of length {} in dimension {dim}", r.len())));
            }
            rats(r)
        })
        .collect()
}

impl ConeDoc {
    pub fn from_vrep(v: &VRep) -> Self {
        Self { dim: v.dim(), generators: Some(v.generators().iter().map(|g| strings(g)).collect()), functionals: None }
    }

    pub fn with_functionals(mut self, h: &HRep) -> Self {
        self.functionals = Some(h.functionals().iter().map(|l| strings(l)).collect());
        self
    }

    /// Generators as given, or the extreme rays of the H-representation.
    pub fn to_vrep(&self) -> Result<VRep> {
        if self.dim == 0 {
            return Err(Error::Parse("dim must be positive".into()));
        }
        match (&self.generators, &self.functionals) {
            (Some(g), _) => VRep::new(self.dim, rows(self.dim, g, "generator")?),
            (None, Some(_)) => rays_of(&self.to_hrep()?.expect("functionals present")),
            (None, None) => Err(Error::Parse("cone needs generators or functionals".into())),
        }
    }

    pub fn to_hrep(&self) -> Result<Option<HRep>> {
        match &self.functionals {
            Some(f) => HRep::new(self.dim, rows(self.dim, f, "functional")?).map(Some),
            None => Ok(None),
        }
    }
}

fn entry(s: &Sym2) -> EntryDoc {
    EntryDoc { a11: format_rat(&s.a11), a12: format_rat(&s.a12), a22: format_rat(&s.a22) }
}

fn sym(e: &EntryDoc) -> Result<Sym2> {
    Ok(Sym2::new(parse_rat(&e.a11)?, parse_rat(&e.a12)?, parse_rat(&e.a22)?))
}

impl TupleDoc {
    pub fn new(kind: &str, entries: &[Sym2]) -> Self {
        Self { kind: Some(kind.into()), dim: entries.len(), entries: entries.iter().map(entry).collect(), tuple: None }
    }

    pub fn about(mut self, a: &MatTuple) -> Self {
        self.tuple = Some(Box::new(Self::new(KIND_TUPLE, &a.entries)));
        self
    }

    /// Entries, with `dim` checked against their count.
    pub fn sym2s(&self) -> Result<Vec<Sym2>> {
        if self.entries.len() != self.dim {
            return Err(Error::Parse(format!("dim {} but {} entries", self.dim, self.entries.len())));
        }
        self.entries.iter().map(sym).collect()
    }

    pub fn to_tuple(&self) -> Result<MatTuple> {
        Ok(MatTuple::new(self.sym2s()?))
    }

    fn attached(&self) -> Result<MatTuple> {
        self.tuple.as_ref().ok_or_else(|| Error::Parse("proof file does not name its tuple".into()))?.to_tuple()
    }
}

fn iso_rows(iso: &LinearIso) -> Vec<Vec<String>> {
    iso.matrix().row_vecs().iter().map(|r| strings(r)).collect()
}

fn iso_of(rs: &[Vec<String>]) -> Result<LinearIso> {
    let d = rs.len();
    LinearIso::new(RatMatrix::from_rows(&rows(d, rs, "iso row")?, d))
}

impl WitnessDoc {
    pub fn from_result(w: &WitnessResult) -> Self {
        let trail = w
            .trail
            .iter()
            .map(|s| match s {
                TrailStep::Base3 => StepDoc::Base3,
                TrailStep::FacetLift(k, iso) => StepDoc::FacetLift { index: *k, iso: iso_rows(iso) },
                TrailStep::VertexFigureLift(k, iso) => StepDoc::VertexFigureLift { index: *k, iso: iso_rows(iso) },
            })
            .collect();
        Self {
            kind: KIND_WITNESS.into(),
            tuple: TupleDoc::new(KIND_TUPLE, &w.tuple.entries),
            certificate: TupleDoc::new(KIND_CERTIFICATE, &w.certificate.blocks),
            trail,
        }
    }

    pub fn to_result(&self) -> Result<WitnessResult> {
        let trail = self
            .trail
            .iter()
            .map(|s| {
                Ok(match s {
                    StepDoc::Base3 => TrailStep::Base3,
                    StepDoc::FacetLift { index, iso } => TrailStep::FacetLift(*index, iso_of(iso)?),
                    StepDoc::VertexFigureLift { index, iso } => TrailStep::VertexFigureLift(*index, iso_of(iso)?),
                })
            })
            .collect::<Result<_>>()?;
        Ok(WitnessResult {
            tuple: self.tuple.to_tuple()?,
            certificate: SepCertificate::new(self.certificate.sym2s()?),
            trail,
        })
    }
}

pub fn parse_cone(text: &str) -> Result<ConeDoc> {
    serde_json::from_str(text).map_err(parse_err)
}

pub fn parse_tuple(text: &str) -> Result<MatTuple> {
    let doc: TupleDoc = serde_json::from_str(text).map_err(parse_err)?;
    match doc.kind.as_deref() {
        None | Some(KIND_TUPLE) => doc.to_tuple(),
        Some(k) => Err(Error::Parse(format!("expected a tuple, found kind {k:?}"))),
    }
}

pub fn parse_proof(text: &str) -> Result<ProofFile> {
    let value: Value = serde_json::from_str(text).map_err(parse_err)?;
    let kind = value.get("kind").and_then(Value::as_str).unwrap_or_default().to_owned();
    match kind.as_str() {
        KIND_WITNESS => {
            let doc: WitnessDoc = serde_json::from_value(value).map_err(parse_err)?;
            doc.to_result().map(ProofFile::Witness)
        }
        KIND_DECOMPOSITION => {
            let doc: TupleDoc = serde_json::from_value(value).map_err(parse_err)?;
            Ok(ProofFile::Decomposition { tuple: doc.attached()?, decomposition: PtDecomposition::new(doc.sym2s()?) })
        }
        KIND_CERTIFICATE => {
            let doc: TupleDoc = serde_json::from_value(value).map_err(parse_err)?;
            Ok(ProofFile::Certificate { tuple: doc.attached()?, certificate: SepCertificate::new(doc.sym2s()?) })
        }
        other => Err(Error::Parse(format!("unknown proof kind {other:?}"))),
    }
}

pub fn to_json<T: Serialize>(doc: &T) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("documents serialize");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat::{frac, rat};
    use crate::polyhedral::{facets_of, families};
    use crate::witness::base_witness;

    #[test]
    fn rationals_are_strings() {
        let doc = TupleDoc::new(KIND_TUPLE, &[Sym2::new(frac(1, 2), rat(-3), rat(0))]);
        let s = to_json(&doc);
        assert!(s.contains("\"1/2\"") && s.contains("\"-3\""));
        assert_eq!(parse_tuple(&s).unwrap().entries[0].a11, frac(1, 2));
    }

    #[test]
    fn cone_from_functionals_only() {
        let sq = families::square_cone();
        let h = facets_of(&sq).unwrap();
        let doc = ConeDoc { dim: 3, generators: None, functionals: None }.with_functionals(&h);
        let v = parse_cone(&to_json(&doc)).unwrap().to_vrep().unwrap();
        assert_eq!(v.canonical(), sq.canonical());
    }

    #[test]
    fn missing_representation_is_rejected() {
        assert!(parse_cone(r#"{"dim": 3}"#).unwrap().to_vrep().is_err());
        assert!(parse_cone(r#"{"dim": 2, "generators": [["1"]]}"#).unwrap().to_vrep().is_err());
    }

    #[test]
    fn witness_round_trip() {
        let w = WitnessResult {
            tuple: base_witness(),
            certificate: SepCertificate::new(vec![Sym2::identity(); 3]),
            trail: vec![TrailStep::FacetLift(2, LinearIso::identity(4)), TrailStep::Base3],
        };
        let ProofFile::Witness(back) = parse_proof(&to_json(&WitnessDoc::from_result(&w))).unwrap() else { panic!() };
        assert_eq!(back, w);
    }

    #[test]
    fn proofs_need_their_tuple() {
        let doc = TupleDoc::new(KIND_CERTIFICATE, &[Sym2::identity()]);
        assert!(parse_proof(&to_json(&doc)).is_err());
        let ProofFile::Certificate { tuple, .. } = parse_proof(&to_json(&doc.about(&base_witness()))).unwrap() else { panic!() };
        assert_eq!(tuple, base_witness());
    }
}

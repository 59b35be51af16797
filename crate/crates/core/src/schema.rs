//! JSON file formats: system descriptions in, reports out.
//!
//! Complex scalars are `[re, im]` pairs and matrices are row-major nested
//! arrays. Every file carries `"schema": 1`.

use nalgebra::{DMatrix, DVector, Matrix2x3, Matrix3, RowDVector, RowVector3, Vector3};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::algebra::C64;
use crate::error::{Error, Result};
use crate::model::{
    BilinearQSDE, BilinearSLH, CascadeQSDE, CascadeSLH, LinearQSDE, LinearSLH, Qsde, Slh,
};
use crate::realizability::RealizabilityReport;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Kind {
    LinearSlh,
    BilinearSlh,
    CascadeSlh,
    LinearQsde,
    BilinearQsde,
    CascadeQsde,
}

impl Kind {
    pub fn as_str(&self) -> &'static str {
        match self {
            Kind::LinearSlh => "linear-slh",
            Kind::BilinearSlh => "bilinear-slh",
            Kind::CascadeSlh => "cascade-slh",
            Kind::LinearQsde => "linear-qsde",
            Kind::BilinearQsde => "bilinear-qsde",
            Kind::CascadeQsde => "cascade-qsde",
        }
    }

    pub fn is_slh(&self) -> bool {
        matches!(self, Kind::LinearSlh | Kind::BilinearSlh | Kind::CascadeSlh)
    }
}

impl std::fmt::Display for Kind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Kind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        serde_json::from_value(Value::String(s.to_owned()))
            .map_err(|_| format!("unknown kind `{s}`"))
    }
}

pub type Cx = [f64; 2];
pub type Rows = Vec<Vec<f64>>;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LinearSlhPayload {
    pub n: usize,
    pub r: Rows,
    pub gamma1: Vec<Cx>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BilinearSlhPayload {
    pub alpha2: [f64; 3],
    pub gamma2: [Cx; 3],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CascadeSlhPayload {
    pub linear: LinearSlhPayload,
    pub bilinear: BilinearSlhPayload,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LinearQsdePayload {
    pub n: usize,
    pub a: Rows,
    pub b: Rows,
    pub c: Rows,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BilinearQsdePayload {
    pub a0: [f64; 3],
    pub a: Rows,
    pub b1: Rows,
    pub b2: Rows,
    pub c: Rows,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CascadeQsdePayload {
    pub n: usize,
    pub a0: Vec<f64>,
    pub a: Rows,
    pub b1: Rows,
    pub b2: Rows,
    pub b: Rows,
    pub c: Rows,
}

/// A parsed system description.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemFile {
    pub schema: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kind: Option<Kind>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
    pub payload: Value,
    /// The SLH parameters a QSDE was synthesized from, if known.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source: Option<Box<SystemFile>>,
}

/// Either side of the synthesis map.
#[derive(Debug, Clone, PartialEq)]
pub enum System {
    Slh(Slh),
    Qsde(Qsde),
}

impl System {
    pub fn kind(&self) -> Kind {
        match self {
            System::Slh(Slh::Linear(_)) => Kind::LinearSlh,
            System::Slh(Slh::Bilinear(_)) => Kind::BilinearSlh,
            System::Slh(Slh::Cascade(_)) => Kind::CascadeSlh,
            System::Qsde(Qsde::Linear(_)) => Kind::LinearQsde,
            System::Qsde(Qsde::Bilinear(_)) => Kind::BilinearQsde,
            System::Qsde(Qsde::Cascade(_)) => Kind::CascadeQsde,
        }
    }
}

fn input(msg: impl Into<String>) -> Error {
    Error::Input(msg.into())
}

fn matrix(rows: &Rows, what: &str) -> Result<DMatrix<f64>> {
    let nr = rows.len();
    let nc = rows.first().map_or(0, Vec::len);
    if let Some(bad) = rows.iter().position(|r| r.len() != nc) {
        return Err(input(format!(
            "{what}: row {bad} has {} entries, expected {nc}",
            rows[bad].len()
        )));
    }
    let flat: Vec<f64> = rows.iter().flatten().copied().collect();
    if let Some(x) = flat.iter().find(|x| !x.is_finite()) {
        return Err(input(format!("{what}: non-finite entry {x}")));
    }
    Ok(DMatrix::from_row_slice(nr, nc, &flat))
}

fn sized(rows: &Rows, what: &str, shape: (usize, usize)) -> Result<DMatrix<f64>> {
    let m = matrix(rows, what)?;
    // an empty nested array carries no column count
    if m.shape() != shape && !(m.nrows() == 0 && shape.0 == 0) {
        return Err(Error::shape(what, shape, m.shape()));
    }
    Ok(m)
}

fn rows_of(m: &DMatrix<f64>) -> Rows {
    m.row_iter().map(|r| r.iter().copied().collect()).collect()
}

fn cx(z: &Cx) -> C64 {
    C64::new(z[0], z[1])
}

fn from_cx(z: &C64) -> Cx {
    [z.re, z.im]
}

fn to_fixed3(m: DMatrix<f64>) -> Matrix3<f64> {
    Matrix3::from_iterator(m.iter().copied())
}

impl LinearSlhPayload {
    pub fn to_model(&self) -> Result<LinearSLH> {
        let d = 2 * self.n;
        let r = sized(&self.r, "r", (d, d))?;
        if self.gamma1.len() != d {
            return Err(Error::shape("gamma1", (1, d), (1, self.gamma1.len())));
        }
        let g = RowDVector::from_iterator(d, self.gamma1.iter().map(cx));
        LinearSLH::new(r, g)
    }

    pub fn from_model(s: &LinearSLH) -> Self {
        LinearSlhPayload {
            n: s.n(),
            r: rows_of(s.r()),
            gamma1: s.gamma1().iter().map(from_cx).collect(),
        }
    }
}

impl BilinearSlhPayload {
    pub fn to_model(&self) -> Result<BilinearSLH> {
        Ok(BilinearSLH::new(
            RowVector3::from(self.alpha2),
            RowVector3::new(
                cx(&self.gamma2[0]),
                cx(&self.gamma2[1]),
                cx(&self.gamma2[2]),
            ),
        ))
    }

    pub fn from_model(s: &BilinearSLH) -> Self {
        BilinearSlhPayload {
            alpha2: [s.alpha2[0], s.alpha2[1], s.alpha2[2]],
            gamma2: [
                from_cx(&s.gamma2[0]),
                from_cx(&s.gamma2[1]),
                from_cx(&s.gamma2[2]),
            ],
        }
    }
}

impl LinearQsdePayload {
    pub fn to_model(&self) -> Result<LinearQSDE> {
        if self.n == 0 {
            return Err(Error::ZeroOscillators);
        }
        let d = 2 * self.n;
        LinearQSDE::new(
            sized(&self.a, "a", (d, d))?,
            sized(&self.b, "b", (d, 2))?,
            sized(&self.c, "c", (2, d))?,
        )
    }

    pub fn from_model(q: &LinearQSDE) -> Self {
        LinearQsdePayload {
            n: q.n(),
            a: rows_of(&q.a),
            b: rows_of(&q.b),
            c: rows_of(&q.c),
        }
    }
}

impl BilinearQsdePayload {
    pub fn to_model(&self) -> Result<BilinearQSDE> {
        Ok(BilinearQSDE {
            a0: Vector3::from(self.a0),
            a: to_fixed3(sized(&self.a, "a", (3, 3))?),
            b1: to_fixed3(sized(&self.b1, "b1", (3, 3))?),
            b2: to_fixed3(sized(&self.b2, "b2", (3, 3))?),
            c: Matrix2x3::from_iterator(sized(&self.c, "c", (2, 3))?.iter().copied()),
        })
    }

    pub fn from_model(q: &BilinearQSDE) -> Self {
        let dy = |m: &Matrix3<f64>| rows_of(&DMatrix::from_column_slice(3, 3, m.as_slice()));
        BilinearQsdePayload {
            a0: [q.a0[0], q.a0[1], q.a0[2]],
            a: dy(&q.a),
            b1: dy(&q.b1),
            b2: dy(&q.b2),
            c: rows_of(&DMatrix::from_column_slice(2, 3, q.c.as_slice())),
        }
    }
}

impl CascadeQsdePayload {
    pub fn to_model(&self) -> Result<CascadeQSDE> {
        if self.n == 0 {
            return Err(Error::ZeroOscillators);
        }
        let d = 2 * self.n + 3;
        if self.a0.len() != d {
            return Err(Error::shape("a0", (d, 1), (self.a0.len(), 1)));
        }
        CascadeQSDE::new(
            self.n,
            DVector::from_column_slice(&self.a0),
            sized(&self.a, "a", (d, d))?,
            sized(&self.b1, "b1", (d, d))?,
            sized(&self.b2, "b2", (d, d))?,
            sized(&self.b, "b", (d, 2))?,
            sized(&self.c, "c", (2, d))?,
        )
    }

    pub fn from_model(q: &CascadeQSDE) -> Self {
        CascadeQsdePayload {
            n: q.n,
            a0: q.a0.iter().copied().collect(),
            a: rows_of(&q.a),
            b1: rows_of(&q.b1),
            b2: rows_of(&q.b2),
            b: rows_of(&q.b),
            c: rows_of(&q.c),
        }
    }
}

fn payload<T: for<'de> Deserialize<'de>>(v: &Value, kind: Kind) -> Result<T> {
    serde_json::from_value(v.clone()).map_err(|e| input(format!("{kind} payload: {e}")))
}

fn to_value<T: Serialize>(t: &T) -> Value {
    serde_json::to_value(t).expect("payload types serialize infallibly")
}

impl SystemFile {
    pub fn parse(text: &str) -> Result<Self> {
        let f: SystemFile =
            serde_json::from_str(text).map_err(|e| input(format!("malformed JSON: {e}")))?;
        if f.schema != SCHEMA_VERSION {
            return Err(input(format!(
                "unsupported schema version {} (expected {SCHEMA_VERSION})",
                f.schema
            )));
        }
        Ok(f)
    }

    /// The kind to interpret the payload as: `forced` wins, but must agree
    /// with a kind stated in the file.
    pub fn resolve_kind(&self, forced: Option<Kind>) -> Result<Kind> {
        match (self.kind, forced) {
            (Some(k), Some(f)) if k != f => Err(input(format!(
                "file declares kind {k} but {f} was requested"
            ))),
            (_, Some(f)) => Ok(f),
            (Some(k), None) => Ok(k),
            (None, None) => Err(input("no kind in file; pass --kind")),
        }
    }

    pub fn system(&self, forced: Option<Kind>) -> Result<System> {
        let kind = self.resolve_kind(forced)?;
        let p = &self.payload;
        Ok(match kind {
            Kind::LinearSlh => System::Slh(Slh::Linear(
                payload::<LinearSlhPayload>(p, kind)?.to_model()?,
            )),
            Kind::BilinearSlh => System::Slh(Slh::Bilinear(
                payload::<BilinearSlhPayload>(p, kind)?.to_model()?,
            )),
            Kind::CascadeSlh => {
                let c: CascadeSlhPayload = payload(p, kind)?;
                System::Slh(Slh::Cascade(CascadeSLH {
                    linear: c.linear.to_model()?,
                    bilinear: c.bilinear.to_model()?,
                }))
            }
            Kind::LinearQsde => System::Qsde(Qsde::Linear(
                payload::<LinearQsdePayload>(p, kind)?.to_model()?,
            )),
            Kind::BilinearQsde => System::Qsde(Qsde::Bilinear(
                payload::<BilinearQsdePayload>(p, kind)?.to_model()?,
            )),
            Kind::CascadeQsde => System::Qsde(Qsde::Cascade(
                payload::<CascadeQsdePayload>(p, kind)?.to_model()?,
            )),
        })
    }

    pub fn from_system(system: &System) -> Self {
        let payload = match system {
            System::Slh(Slh::Linear(s)) => to_value(&LinearSlhPayload::from_model(s)),
            System::Slh(Slh::Bilinear(s)) => to_value(&BilinearSlhPayload::from_model(s)),
            System::Slh(Slh::Cascade(s)) => to_value(&CascadeSlhPayload {
                linear: LinearSlhPayload::from_model(&s.linear),
                bilinear: BilinearSlhPayload::from_model(&s.bilinear),
            }),
            System::Qsde(Qsde::Linear(q)) => to_value(&LinearQsdePayload::from_model(q)),
            System::Qsde(Qsde::Bilinear(q)) => to_value(&BilinearQsdePayload::from_model(q)),
            System::Qsde(Qsde::Cascade(q)) => to_value(&CascadeQsdePayload::from_model(q)),
        };
        SystemFile {
            schema: SCHEMA_VERSION,
            kind: Some(system.kind()),
            name: None,
            description: None,
            payload,
            source: None,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("system files serialize infallibly")
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConditionRecord {
    pub id: String,
    pub label: String,
    pub residual: f64,
    pub tolerance: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportFile {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub input: String,
    pub input_sha256: String,
    pub kind: Kind,
    pub tolerance: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c_shape: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fock_dim: Option<usize>,
    pub conditions: Vec<ConditionRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub recovered: Option<SystemFile>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certified: Option<bool>,
    pub verdict: Verdict,
}

impl ReportFile {
    /// Wraps `report`; the verdict is derived from its conditions.
    pub fn new(
        command: &str,
        input: &str,
        digest: &str,
        kind: Kind,
        report: &RealizabilityReport,
    ) -> Self {
        let conditions = report
            .conditions
            .iter()
            .map(|c| ConditionRecord {
                id: c.id.clone(),
                label: c.label.clone(),
                residual: c.residual,
                tolerance: report.tolerance,
                pass: c.pass,
            })
            .collect();
        ReportFile {
            tool: "qsde".into(),
            version: env!("CARGO_PKG_VERSION").into(),
            command: command.into(),
            input: input.into(),
            input_sha256: digest.into(),
            kind,
            tolerance: report.tolerance,
            c_shape: report.c_shape.map(|s| s.as_str().to_owned()),
            fock_dim: None,
            conditions,
            recovered: report
                .recovered
                .as_ref()
                .map(|s| SystemFile::from_system(&System::Slh(s.clone()))),
            certified: report.recovered.as_ref().map(|_| report.certified()),
            verdict: if report.pass() {
                Verdict::Pass
            } else {
                Verdict::Fail
            },
        }
    }

    pub fn is_consistent(&self) -> bool {
        let all = self.conditions.iter().all(|c| c.pass);
        (self.verdict == Verdict::Pass) == all
    }
}

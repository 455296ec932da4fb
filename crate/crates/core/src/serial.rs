//! JSON formats for elements, vectors, code specs and decode results, plus a
//! small parser for polynomial strings such as `z^2+z+y`.

use serde::{Deserialize, Serialize};

use crate::decoder::{DecodeResult, FailureReason};
use crate::error::{Error, Result};
use crate::lrs::{gen_points_coprime, gen_points_primitive, LrsCode};
use crate::metric::LengthPartition;
use crate::ring::{ChainRing, ExtElement, GaloisExtension, GaloisRing, RingElement};
use crate::skew::{PointSystem, SkewPolynomial};

/// Format version written into code spec files.
pub const FORMAT_VERSION: u32 = 1;

/// Textual element encoding.
///
/// The canonical form is nested: entry `j` lists the `y`-coordinates of the
/// coefficient of `ξ^j`. An integer denotes a constant. A flat array lists
/// `ξ`-coefficients when `s = 1`, or `y`-coefficients when `m = 1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ElementJson {
    Int(i64),
    Flat(Vec<i64>),
    Nested(Vec<Vec<i64>>),
}

fn to_i64(c: u64) -> i64 {
    c as i64
}

pub fn ring_element_to_json(x: &RingElement) -> ElementJson {
    ElementJson::Flat(x.coeffs().iter().copied().map(to_i64).collect())
}

pub fn ring_element_from_json(ring: &GaloisRing, x: &ElementJson) -> Result<RingElement> {
    match x {
        ElementJson::Int(c) => Ok(ring.from_int(*c)),
        ElementJson::Flat(v) if v.len() <= ring.s() => Ok(ring.element(v)),
        ElementJson::Flat(v) => Err(Error::Parse(format!("ring element has {} coordinates, s = {}", v.len(), ring.s()))),
        ElementJson::Nested(_) => Err(Error::Parse("nested array is not a base-ring element".into())),
    }
}

pub fn element_to_json(ext: &GaloisExtension, x: &ExtElement) -> ElementJson {
    ElementJson::Nested((0..ext.m()).map(|j| ext.coordinate(x, j).coeffs().iter().copied().map(to_i64).collect()).collect())
}

pub fn element_from_json(ext: &GaloisExtension, x: &ElementJson) -> Result<ExtElement> {
    let s = ext.base().s();
    let m = ext.m();
    match x {
        ElementJson::Int(c) => Ok(ext.from_int(*c)),
        ElementJson::Flat(v) if s == 1 && v.len() <= m => Ok(ext.from_power_coeffs(v)),
        ElementJson::Flat(v) if m == 1 && v.len() <= s => Ok(ext.embed(&ext.base().element(v))),
        ElementJson::Flat(_) => Err(Error::Parse(format!("flat element does not fit m = {m}, s = {s}; use nested form"))),
        ElementJson::Nested(rows) => {
            if rows.len() > m || rows.iter().any(|r| r.len() > s) {
                return Err(Error::Parse(format!("nested element exceeds shape {m} x {s}")));
            }
            let refs: Vec<&[i64]> = rows.iter().map(Vec::as_slice).collect();
            Ok(ext.element(&refs))
        }
    }
}

pub fn vector_to_json(ext: &GaloisExtension, v: &[ExtElement]) -> Vec<ElementJson> {
    v.iter().map(|x| element_to_json(ext, x)).collect()
}

pub fn vector_from_json(ext: &GaloisExtension, v: &[ElementJson]) -> Result<Vec<ExtElement>> {
    v.iter().map(|x| element_from_json(ext, x)).collect()
}

pub fn polynomial_to_json(ext: &GaloisExtension, f: &SkewPolynomial) -> Vec<ElementJson> {
    vector_to_json(ext, f.coeffs())
}

pub fn polynomial_from_json(ext: &GaloisExtension, v: &[ElementJson]) -> Result<SkewPolynomial> {
    Ok(SkewPolynomial::new(ext, vector_from_json(ext, v)?))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RingSpec {
    pub p: u64,
    pub r: u32,
    /// Ascending integer coefficients of `g`.
    pub g: Vec<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtensionSpec {
    /// Ascending coefficients of `h`, each a base-ring element.
    pub h: Vec<ElementJson>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AutoPoints {
    Primitive,
    Coprime,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PointsSpec {
    Explicit { a: Vec<ElementJson>, beta: Vec<Vec<ElementJson>> },
    Auto { auto: AutoPoints },
}

/// The code spec document.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeSpecFile {
    pub format: u32,
    pub ring: RingSpec,
    pub extension: ExtensionSpec,
    pub partition: Vec<usize>,
    pub k: usize,
    pub points: PointsSpec,
}

impl CodeSpecFile {
    pub fn ring(&self) -> Result<GaloisRing> {
        GaloisRing::new(self.ring.p, self.ring.r, &self.ring.g)
    }

    pub fn extension(&self) -> Result<GaloisExtension> {
        let base = self.ring()?;
        let h = self.extension.h.iter().map(|c| ring_element_from_json(&base, c)).collect::<Result<Vec<_>>>()?;
        GaloisExtension::new(base, h)
    }

    /// Builds and validates the code.
    pub fn build(&self) -> Result<LrsCode> {
        if self.format != FORMAT_VERSION {
            return Err(Error::Parse(format!("unsupported format {}", self.format)));
        }
        let ext = self.extension()?;
        let partition = LengthPartition::new(self.partition.clone())?;
        let points = match &self.points {
            PointsSpec::Auto { auto: AutoPoints::Primitive } => gen_points_primitive(&ext, &partition)?,
            PointsSpec::Auto { auto: AutoPoints::Coprime } => gen_points_coprime(&ext, &partition)?,
            PointsSpec::Explicit { a, beta } => {
                let a = vector_from_json(&ext, a)?;
                let beta = beta.iter().map(|b| vector_from_json(&ext, b)).collect::<Result<Vec<_>>>()?;
                let pts = PointSystem::new(&ext, a, beta)?;
                if pts.partition() != &partition {
                    return Err(Error::PartitionMismatch { expected: partition.total(), got: pts.len() });
                }
                pts
            }
        };
        LrsCode::new(&ext, points, self.k)
    }

    /// Spec with explicit points for an existing code.
    pub fn from_code(code: &LrsCode) -> Self {
        let ext = code.ext();
        let base = ext.base();
        CodeSpecFile {
            format: FORMAT_VERSION,
            ring: RingSpec { p: base.p(), r: base.r(), g: base.g().iter().copied().map(to_i64).collect() },
            extension: ExtensionSpec { h: ext.h().iter().map(ring_element_to_json).collect() },
            partition: code.partition().blocks().to_vec(),
            k: code.k(),
            points: PointsSpec::Explicit {
                a: vector_to_json(ext, code.points().a()),
                beta: code.points().beta().iter().map(|b| vector_to_json(ext, b)).collect(),
            },
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("spec serializes")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Success,
    Failure,
}

/// Serialized decode outcome.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecodeResultJson {
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub message: Option<Vec<ElementJson>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub codeword: Option<Vec<ElementJson>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error_weight: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<FailureReason>,
}

impl DecodeResultJson {
    pub fn new(ext: &GaloisExtension, res: &DecodeResult) -> Self {
        match res {
            DecodeResult::Success { message, codeword, error_weight } => DecodeResultJson {
                status: Status::Success,
                message: Some(vector_to_json(ext, message)),
                codeword: Some(vector_to_json(ext, codeword)),
                error_weight: Some(*error_weight),
                reason: None,
            },
            DecodeResult::Failure { reason } => DecodeResultJson {
                status: Status::Failure,
                message: None,
                codeword: None,
                error_weight: None,
                reason: Some(*reason),
            },
        }
    }
}

/// Parses a polynomial in `z` whose coefficients are polynomials in `y`
/// with integer coefficients, e.g. `z^4+z+1`, `z^2 + z + y`, `3*y*z - 2`.
/// Returns `coeffs[i][j]`, the integer multiplying `y^j z^i`.
pub fn parse_bivariate(text: &str) -> Result<Vec<Vec<i64>>> {
    let err = |msg: &str| Error::Parse(format!("{msg} in polynomial {text:?}"));
    let cleaned: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if cleaned.is_empty() {
        return Err(err("empty input"));
    }
    let mut terms: Vec<(i64, String)> = Vec::new();
    let mut sign = 1;
    let mut current = String::new();
    for (i, ch) in cleaned.chars().enumerate() {
        if (ch == '+' || ch == '-') && i > 0 && !current.ends_with('^') {
            if current.is_empty() {
                return Err(err("dangling operator"));
            }
            terms.push((sign, std::mem::take(&mut current)));
            sign = if ch == '-' { -1 } else { 1 };
        } else if (ch == '+' || ch == '-') && i == 0 {
            sign = if ch == '-' { -1 } else { 1 };
        } else {
            current.push(ch);
        }
    }
    if current.is_empty() {
        return Err(err("dangling operator"));
    }
    terms.push((sign, current));

    let mut out: Vec<Vec<i64>> = Vec::new();
    for (sign, term) in terms {
        let mut coeff: i64 = sign;
        let (mut dy, mut dz) = (0usize, 0usize);
        for factor in term.split('*') {
            if factor.is_empty() {
                return Err(err("empty factor"));
            }
            let (var, exp) = match factor.split_once('^') {
                Some((v, e)) => (v, e.parse::<usize>().map_err(|_| err("bad exponent"))?),
                None => (factor, 1),
            };
            match var {
                "y" => dy += exp,
                "z" => dz += exp,
                _ => {
                    let c: i64 = var.parse().map_err(|_| err(&format!("unknown factor {var:?}")))?;
                    coeff = coeff.checked_mul(c.checked_pow(exp as u32).ok_or_else(|| err("overflow"))?).ok_or_else(|| err("overflow"))?;
                }
            }
        }
        if out.len() <= dz {
            out.resize(dz + 1, Vec::new());
        }
        if out[dz].len() <= dy {
            out[dz].resize(dy + 1, 0);
        }
        out[dz][dy] += coeff;
    }
    Ok(out)
}

/// Coefficients of a polynomial in `y` alone, ascending.
pub fn parse_univariate_y(text: &str) -> Result<Vec<i64>> {
    let bi = parse_bivariate(text)?;
    if bi.len() > 1 && bi[1..].iter().any(|c| c.iter().any(|&x| x != 0)) {
        return Err(Error::Parse(format!("{text:?} must be a polynomial in y")));
    }
    Ok(bi.into_iter().next().unwrap_or_default())
}

/// Coefficients of `h` as base-ring elements (each a `y`-coefficient list).
pub fn parse_extension_poly(text: &str) -> Result<Vec<ElementJson>> {
    Ok(parse_bivariate(text)?.into_iter().map(ElementJson::Flat).collect())
}

//! Affine 2-plane sections of both extensions on an exact rational grid.

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exact::rat::{frac, rat, to_f64};
use crate::exact::{Rat, Sym2};
use crate::nc_sets::{member_ph, MatTuple, PtDecomposition, SepCertificate};
use crate::solver::{Decision, PtOracle, SolverConfig};

/// The plane `{base + x·dx + y·dy}` sampled on `grid[0] × grid[1]` points
/// spanning `range[0]` in `x` and `range[1]` in `y`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SectionSpec {
    pub base: MatTuple,
    pub dx: MatTuple,
    pub dy: MatTuple,
    pub grid: [usize; 2],
    pub range: [(Rat, Rat); 2],
}

impl Default for SectionSpec {
    /// `(diag(x, −1), offdiag(y), I)` for `x, y ∈ [−6/5, 6/5]`, 81 points per axis.
    fn default() -> Self {
        let z = Sym2::zero;
        let lim = frac(6, 5);
        Self {
            base: MatTuple::new(vec![Sym2::diag(rat(0), rat(-1)), z(), Sym2::identity()]),
            dx: MatTuple::new(vec![Sym2::diag(rat(1), rat(0)), z(), z()]),
            dy: MatTuple::new(vec![z(), Sym2::offdiag(rat(1)), z()]),
            grid: [81, 81],
            range: [(-lim.clone(), lim.clone()), (-lim.clone(), lim)],
        }
    }
}

impl SectionSpec {
    pub fn with_grid(mut self, n: usize) -> Self {
        self.grid = [n, n];
        self
    }

    pub fn with_range(mut self, lo: Rat, hi: Rat) -> Self {
        self.range = [(lo.clone(), hi.clone()), (lo, hi)];
        self
    }

    pub fn validate(&self) -> Result<()> {
        let d = self.base.dim();
        if self.dx.dim() != d || self.dy.dim() != d {
            return Err(Error::InvalidRepresentation("section tuples differ in dimension".into()));
        }
        if self.grid.iter().any(|&n| n < 2) {
            return Err(Error::InvalidRepresentation("grid needs at least two points per axis".into()));
        }
        if self.range.iter().any(|(lo, hi)| lo >= hi) {
            return Err(Error::InvalidRepresentation("empty range".into()));
        }
        let flat = |t: &MatTuple| -> Vec<Rat> { t.entries.iter().flat_map(|s| [s.a11.clone(), s.a12.clone(), s.a22.clone()]).collect() };
        let (u, w) = (flat(&self.dx), flat(&self.dy));
        let dependent = (0..u.len()).all(|i| (0..u.len()).all(|j| (&u[i] * &w[j] - &u[j] * &w[i]).is_zero()));
        if dependent {
            return Err(Error::InvalidRepresentation("directions are linearly dependent".into()));
        }
        Ok(())
    }

    /// `k`-th of the `grid[axis]` equally spaced values.
    pub fn coordinate(&self, axis: usize, k: usize) -> Rat {
        let (lo, hi) = &self.range[axis];
        let steps = Rat::from_integer(BigInt::from(self.grid[axis] - 1));
        lo + (hi - lo) * Rat::from_integer(BigInt::from(k)) / steps
    }

    pub fn point(&self, x: &Rat, y: &Rat) -> MatTuple {
        let entries = self
            .base
            .entries
            .iter()
            .zip(&self.dx.entries)
            .zip(&self.dy.entries)
            .map(|((b, u), w)| &(b + &u.scale(x)) + &w.scale(y))
            .collect();
        MatTuple::new(entries)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PtClass {
    Member(PtDecomposition),
    NonMember(SepCertificate),
    Undecided(String),
}

impl PtClass {
    pub fn label(&self) -> &'static str {
        match self {
            PtClass::Member(_) => "member",
            PtClass::NonMember(_) => "non-member",
            PtClass::Undecided(_) => "undecided",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SectionPoint {
    pub x: Rat,
    pub y: Rat,
    pub tuple: MatTuple,
    pub ph: bool,
    pub pt: PtClass,
}

/// Classifies every grid point, `y` in the outer loop and `x` in the inner,
/// both ascending.
pub fn classify(oracle: &PtOracle, spec: &SectionSpec, cfg: &SolverConfig) -> Result<Vec<SectionPoint>> {
    spec.validate()?;
    if spec.base.dim() != oracle.cone().dim() {
        return Err(Error::DimensionMismatch { expected: oracle.cone().dim(), found: spec.base.dim() });
    }
    let mut out = Vec::with_capacity(spec.grid[0] * spec.grid[1]);
    for j in 0..spec.grid[1] {
        let y = spec.coordinate(1, j);
        for i in 0..spec.grid[0] {
            let x = spec.coordinate(0, i);
            out.push(classify_point(oracle, spec, x, y.clone(), cfg)?);
        }
    }
    Ok(out)
}

pub fn classify_point(oracle: &PtOracle, spec: &SectionSpec, x: Rat, y: Rat, cfg: &SolverConfig) -> Result<SectionPoint> {
    let tuple = spec.point(&x, &y);
    let ph = member_ph(oracle.facets(), &tuple)?;
    let pt = match oracle.decide(&tuple, cfg)? {
        Decision::Member(d) => PtClass::Member(d),
        Decision::NonMember(c) => PtClass::NonMember(c),
        Decision::Undecided(why) => PtClass::Undecided(why),
    };
    Ok(SectionPoint { x, y, tuple, ph, pt })
}

/// Exact decimal when the denominator divides a power of ten, else `p/q`.
pub fn format_coordinate(x: &Rat) -> String {
    let mut d = x.denom().clone();
    let (two, five) = (BigInt::from(2), BigInt::from(5));
    let mut digits = 0usize;
    let (mut twos, mut fives) = (0usize, 0usize);
    while d.is_even() {
        d /= &two;
        twos += 1;
    }
    while (&d % &five).is_zero() {
        d /= &five;
        fives += 1;
    }
    if !d.is_one() {
        return x.to_string();
    }
    digits += twos.max(fives);
    if digits == 0 {
        return x.numer().to_string();
    }
    let scaled = (x * Rat::from_integer(num_traits::pow(BigInt::from(10), digits))).to_integer();
    let sign = if scaled.is_negative() { "-" } else { "" };
    let s = scaled.abs().to_string();
    let s = format!("{s:0>width$}", width = digits + 1);
    let (int, frac) = s.split_at(s.len() - digits);
    format!("{sign}{int}.{frac}")
}

pub fn to_csv(points: &[SectionPoint]) -> String {
    let mut s = String::from("x,y,ph,pt\n");
    for p in points {
        let ph = if p.ph { "member" } else { "non-member" };
        let _ = writeln!(s, "{},{},{},{}", format_coordinate(&p.x), format_coordinate(&p.y), ph, p.pt.label());
    }
    s
}

const CELL: f64 = 6.0;
const MARGIN: f64 = 20.0;
const PT_COLOR: &str = "#1f4fd1";
const PH_ONLY_COLOR: &str = "#d1321f";
const UNDECIDED_COLOR: &str = "#9a9a9a";

/// One cell per grid point: blue inside `C₂^pt`, red in `C₂^ph` only, grey if
/// undecided, blank outside `C₂^ph`.
pub fn to_svg(spec: &SectionSpec, points: &[SectionPoint]) -> String {
    let [nx, ny] = spec.grid;
    let w = nx as f64 * CELL + 2.0 * MARGIN;
    let h = ny as f64 * CELL + 2.0 * MARGIN;
    let mut s = String::new();
    let _ = writeln!(s, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#);
    let _ = writeln!(s, r#"<rect x="0" y="0" width="{w}" height="{h}" fill="white"/>"#);
    for (k, p) in points.iter().enumerate() {
        let (i, j) = (k % nx, k / nx);
        let fill = match (&p.pt, p.ph) {
            (PtClass::Member(_), _) => PT_COLOR,
            (PtClass::Undecided(_), _) => UNDECIDED_COLOR,
            (PtClass::NonMember(_), true) => PH_ONLY_COLOR,
            (PtClass::NonMember(_), false) => continue,
        };
        let px = MARGIN + i as f64 * CELL;
        let py = MARGIN + (ny - 1 - j) as f64 * CELL;
        let _ = writeln!(s, r#"<rect x="{px}" y="{py}" width="{CELL}" height="{CELL}" fill="{fill}"/>"#);
    }
    let _ = writeln!(
        s,
        r#"<rect x="{MARGIN}" y="{MARGIN}" width="{}" height="{}" fill="none" stroke="black"/>"#,
        nx as f64 * CELL,
        ny as f64 * CELL
    );
    let (x0, x1) = (&spec.range[0].0, &spec.range[0].1);
    let (y0, y1) = (&spec.range[1].0, &spec.range[1].1);
    let _ = writeln!(
        s,
        r#"<text x="{MARGIN}" y="{}" font-size="10" font-family="sans-serif">x: [{}, {}]  y: [{}, {}]</text>"#,
        h - 5.0,
        to_f64(x0),
        to_f64(x1),
        to_f64(y0),
        to_f64(y1)
    );
    s.push_str("</svg>\n");
    s
}

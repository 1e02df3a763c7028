use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::rotation::{trace_faces, RotationSystem};
use crate::error::{Error, Result};

/// Closed surface (by Euler characteristic and orientability) with `p`
/// disjoint open disks removed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SurfaceSignature {
    /// Euler characteristic of the closed surface.
    pub chi: i32,
    pub orientable: bool,
    pub p: usize,
}

impl SurfaceSignature {
    pub fn closed(chi: i32, orientable: bool) -> Result<Self> {
        Self::new(chi, orientable, 0)
    }

    pub fn new(chi: i32, orientable: bool, p: usize) -> Result<Self> {
        let s = Self { chi, orientable, p };
        s.validate()?;
        Ok(s)
    }

    pub fn sphere() -> Self {
        Self { chi: 2, orientable: true, p: 0 }
    }

    pub fn projective_plane() -> Self {
        Self { chi: 1, orientable: false, p: 0 }
    }

    pub fn klein_bottle() -> Self {
        Self { chi: 0, orientable: false, p: 0 }
    }

    pub fn torus() -> Self {
        Self { chi: 0, orientable: true, p: 0 }
    }

    /// Connected sum of `g ≥ 1` tori.
    pub fn handles(g: u32) -> Self {
        Self { chi: 2 - 2 * g as i32, orientable: true, p: 0 }
    }

    /// Connected sum of `k ≥ 1` projective planes.
    pub fn crosscaps(k: u32) -> Self {
        Self { chi: 2 - k as i32, orientable: false, p: 0 }
    }

    pub fn with_boundary(self, p: usize) -> Self {
        Self { p, ..self }
    }

    pub fn validate(&self) -> Result<()> {
        if self.chi > 2 {
            return Err(Error::InvalidSurface(format!("Euler characteristic {} exceeds 2", self.chi)));
        }
        if self.orientable && self.chi % 2 != 0 {
            return Err(Error::InvalidSurface(format!("orientable surface with odd Euler characteristic {}", self.chi)));
        }
        if !self.orientable && self.chi > 1 {
            return Err(Error::InvalidSurface("non-orientable surface with Euler characteristic 2".into()));
        }
        Ok(())
    }

    /// χ(Σ_p) = χ(Σ) − p.
    pub fn chi_bounded(&self) -> i32 {
        self.chi - self.p as i32
    }

    pub fn genus(&self) -> u32 {
        if self.orientable {
            ((2 - self.chi) / 2) as u32
        } else {
            (2 - self.chi) as u32
        }
    }

    /// Closed surfaces Σ' with Σ = Σ' # Σ'' for some closed Σ'' other than the
    /// sphere.
    pub fn summands(&self) -> Vec<SurfaceSignature> {
        let g = self.genus();
        let mut out = Vec::new();
        if self.orientable {
            out.extend((0..g).map(|h| if h == 0 { Self::sphere() } else { Self::handles(h) }));
        } else {
            out.push(Self::sphere());
            out.extend((1..g).map(Self::crosscaps));
            // T^h # P^{g−2h} is non-orientable when g − 2h ≥ 1
            out.extend((1..).take_while(|h| 2 * h < g).map(Self::handles));
        }
        out
    }
}

impl fmt::Display for SurfaceSignature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let base = match (self.chi, self.orientable) {
            (2, _) => "sphere".to_string(),
            (1, false) => "projective".to_string(),
            (0, false) => "klein".to_string(),
            (0, true) => "torus".to_string(),
            (_, true) => format!("sum{}T", self.genus()),
            (_, false) => format!("sum{}P", self.genus()),
        };
        if self.p == 0 {
            write!(f, "{base}")
        } else {
            write!(f, "{base}_{}", self.p)
        }
    }
}

/// Closed surface names: `sphere`, `projective`, `klein`, `torus`,
/// `genus2o`, `sumkP` (k crosscaps), `sumkT` (k handles).
impl FromStr for SurfaceSignature {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidSurface(format!("unknown surface name '{s}'"));
        let count = |body: &str| body.parse::<u32>().ok().filter(|&k| k >= 1);
        match s {
            "sphere" => Ok(Self::sphere()),
            "projective" => Ok(Self::projective_plane()),
            "klein" => Ok(Self::klein_bottle()),
            "torus" => Ok(Self::torus()),
            "genus2o" => Ok(Self::handles(2)),
            _ => {
                let body = s.strip_prefix("sum").ok_or_else(bad)?;
                if let Some(k) = body.strip_suffix('P') {
                    count(k).map(Self::crosscaps).ok_or_else(bad)
                } else if let Some(k) = body.strip_suffix('T') {
                    count(k).map(Self::handles).ok_or_else(bad)
                } else {
                    Err(bad())
                }
            }
        }
    }
}

/// Euler characteristic and orientability of the closed surface carrying the
/// embedding, `p = 0`.
pub fn classify_surface(rs: &RotationSystem) -> Result<SurfaceSignature> {
    if !rs.is_connected() {
        return Err(Error::Disconnected);
    }
    let v = rs.num_vertices() as i32;
    let e = rs.num_edges() as i32;
    // a lone vertex is a sphere with one face
    let f = if e == 0 { 1 } else { trace_faces(rs)?.len() as i32 };
    Ok(SurfaceSignature { chi: v - e + f, orientable: super::rotation::is_orientable(rs), p: 0 })
}

fn isqrt(n: i64) -> i64 {
    if n < 0 {
        return -1;
    }
    let mut r = (n as f64).sqrt() as i64;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

/// ⌊(a + √d)/2⌋ in exact integer arithmetic.
fn half_floor(a: i64, d: i64) -> i64 {
    (a + isqrt(d)).div_euclid(2)
}

/// Chromatic number of the closed surface: the Heawood value
/// ⌊(7 + √(49 − 24χ))/2⌋, except 6 on the Klein bottle.
pub fn chr_closed(sig: &SurfaceSignature) -> Result<u32> {
    sig.validate()?;
    if sig.chi == 0 && !sig.orientable {
        return Ok(6);
    }
    Ok(half_floor(7, 49 - 24 * sig.chi as i64) as u32)
}

/// ⌊c⌋ with c = (5 + √(25 − 24χ(Σ) + 24p))/2.
pub fn coloring_constant(closed: &SurfaceSignature, p: usize) -> u32 {
    half_floor(5, 25 - 24 * closed.chi as i64 + 24 * p as i64) as u32
}

/// `Chr(Σ) − 1 ≤ Chr₀(Σ_p) ≤ min(Chr(Σ), ⌊c⌋)`.
pub fn chr0_bounds(closed: &SurfaceSignature, p: usize) -> Result<(u32, u32)> {
    check_p(p)?;
    let chr = chr_closed(closed)?;
    Ok((chr - 1, chr.min(coloring_constant(closed, p))))
}

/// Exact relative chromatic number where it is known, `None` on open cases.
pub fn chr0_exact(closed: &SurfaceSignature, p: usize) -> Result<Option<u32>> {
    let (lo, hi) = chr0_known(closed, p)?;
    Ok((lo == hi).then_some(lo))
}

/// Best known interval for Chr₀(Σ_p).
///
/// Beyond the two-sided bound this uses `Chr₀(Σ_1) = Chr(Σ) − 1`,
/// `Chr₀(Σ_p) = Chr(Σ)` once `2p ≥ Chr(Σ) − 1`, the individually constructed
/// embeddings, monotonicity in `p` and monotonicity under connected sum.
pub fn chr0_known(closed: &SurfaceSignature, p: usize) -> Result<(u32, u32)> {
    check_p(p)?;
    let closed = closed.with_boundary(0);
    let chr = chr_closed(&closed)?;
    if p == 1 {
        return Ok((chr - 1, chr - 1));
    }
    if 2 * p as u32 >= chr - 1 {
        return Ok((chr, chr));
    }
    if let Some(v) = constructed(&closed, p) {
        return Ok((v, v));
    }
    let (mut lo, hi) = chr0_bounds(&closed, p)?;
    lo = lo.max(chr0_known(&closed, p - 1)?.0);
    for s in closed.summands() {
        lo = lo.max(chr0_known(&s, p)?.0);
    }
    Ok((lo, hi))
}

/// Values obtained from explicit proper embeddings of complete graphs.
fn constructed(closed: &SurfaceSignature, p: usize) -> Option<u32> {
    match (closed.chi, closed.orientable, p) {
        (1, false, 2) => Some(5),
        (0, false, 2) => Some(6),
        (-1, false, 2) => Some(7),
        (-2, true, 2) => Some(8),
        (-2, false, 3) => Some(8),
        (-3 | -4, _, 3) => Some(9),
        (-5, _, 4) => Some(10),
        (-6, true, 3) => Some(10),
        _ => None,
    }
}

fn check_p(p: usize) -> Result<()> {
    if p == 0 {
        return Err(Error::InvalidArgument("relative chromatic number needs p >= 1".into()));
    }
    Ok(())
}

/// Upper bound (3 + √(25 − 24χ))/2 on the minimum degree of a graph properly
/// embedded in a bounded surface of Euler characteristic χ ≤ 0.
pub fn min_degree_bound(chi_bounded: i32) -> f64 {
    (3.0 + (25.0 - 24.0 * chi_bounded as f64).sqrt()) / 2.0
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn closed_chromatic_numbers() {
        assert_eq!(chr_closed(&SurfaceSignature::sphere()).unwrap(), 4);
        assert_eq!(chr_closed(&SurfaceSignature::projective_plane()).unwrap(), 6);
        assert_eq!(chr_closed(&SurfaceSignature::torus()).unwrap(), 7);
        assert_eq!(chr_closed(&SurfaceSignature::klein_bottle()).unwrap(), 6);
        assert_eq!(chr_closed(&SurfaceSignature::handles(2)).unwrap(), 8);
        assert_eq!(chr_closed(&SurfaceSignature::crosscaps(5)).unwrap(), 9);
        assert_eq!(chr_closed(&SurfaceSignature::crosscaps(7)).unwrap(), 10);
        assert!(chr_closed(&SurfaceSignature { chi: 3, orientable: true, p: 0 }).is_err());
    }

    #[test]
    fn exact_square_roots() {
        // 49 − 24χ is a perfect square at χ = 2, 0, −3, −5, …
        for k in 0..2000i64 {
            assert_eq!(isqrt(k * k), k);
            if k > 0 {
                assert_eq!(isqrt(k * k - 1), k - 1);
            }
        }
    }

    #[test]
    fn bounds_examples() {
        assert_eq!(chr0_bounds(&SurfaceSignature::sphere(), 1).unwrap(), (3, 3));
        assert_eq!(chr0_bounds(&SurfaceSignature::projective_plane(), 1).unwrap().0, 5);
        assert_eq!(chr0_exact(&SurfaceSignature::torus(), 3).unwrap(), Some(7));
        assert_eq!(chr0_exact(&SurfaceSignature::klein_bottle(), 2).unwrap(), Some(6));
        assert_eq!(chr0_exact(&SurfaceSignature::handles(2), 2).unwrap(), Some(8));
        assert_eq!(chr0_exact(&SurfaceSignature::crosscaps(4), 2).unwrap(), None);
        assert!(chr0_bounds(&SurfaceSignature::sphere(), 0).is_err());
    }

    #[test]
    fn degree_bound_values() {
        assert_eq!(min_degree_bound(0), 4.0);
        assert_eq!(min_degree_bound(-1), 5.0);
        assert!((min_degree_bound(-5) - (3.0 + 145f64.sqrt()) / 2.0).abs() < 1e-12);
        assert!((min_degree_bound(-5) - 7.52).abs() < 0.01);
    }

    #[test]
    fn names_round_trip() {
        for name in ["sphere", "projective", "klein", "torus", "sum3P", "sum4T", "sum1T", "sum2P"] {
            let s: SurfaceSignature = name.parse().unwrap();
            let back: SurfaceSignature = s.to_string().parse().unwrap();
            assert_eq!(s, back);
        }
        assert_eq!("genus2o".parse::<SurfaceSignature>().unwrap(), SurfaceSignature::handles(2));
        assert_eq!("sum2P".parse::<SurfaceSignature>().unwrap(), SurfaceSignature::klein_bottle());
        assert!("sum0P".parse::<SurfaceSignature>().is_err());
        assert!("donut".parse::<SurfaceSignature>().is_err());
    }

    #[test]
    fn summands_of_small_surfaces() {
        let s = SurfaceSignature::crosscaps(5).summands();
        assert!(s.contains(&SurfaceSignature::handles(2)));
        assert!(s.contains(&SurfaceSignature::crosscaps(4)));
        assert!(!s.contains(&SurfaceSignature::handles(3)));
        assert_eq!(SurfaceSignature::torus().summands(), vec![SurfaceSignature::sphere()]);
    }

    fn any_surface() -> impl Strategy<Value = SurfaceSignature> {
        prop_oneof![
            (0u32..6).prop_map(|g| if g == 0 { SurfaceSignature::sphere() } else { SurfaceSignature::handles(g) }),
            (1u32..12).prop_map(SurfaceSignature::crosscaps),
        ]
    }

    proptest! {
        #[test]
        fn exact_value_lies_within_bounds(s in any_surface(), p in 1usize..8) {
            let (lo, hi) = chr0_bounds(&s, p).unwrap();
            prop_assert!(lo <= hi);
            if let Some(v) = chr0_exact(&s, p).unwrap() {
                prop_assert!(lo <= v && v <= hi);
            }
            let (klo, khi) = chr0_known(&s, p).unwrap();
            prop_assert!(lo <= klo && klo <= khi && khi <= hi);
        }

        #[test]
        fn exact_value_is_monotone_in_p(s in any_surface(), p in 1usize..8) {
            if let (Some(a), Some(b)) = (chr0_exact(&s, p).unwrap(), chr0_exact(&s, p + 1).unwrap()) {
                prop_assert!(a <= b);
            }
            prop_assert!(chr0_known(&s, p).unwrap().0 <= chr0_known(&s, p + 1).unwrap().0);
        }
    }
}

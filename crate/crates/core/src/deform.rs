//! Deformations of general K3 double covers of rational scrolls into
//! polarized K3 surfaces: the scroll-type catalog, the polarization class
//! for each even degree, and the induced map on genus invariants.
//!
//! The map is computed along two independent routes and cross-checked on
//! every call: an explicit per-type case table, and the first-principles
//! rules reading the polarization class against the subgroup `H` and the
//! characteristic element `v` modulo `2 S_-`.

use crate::census::{self, GenusInvariant};
use crate::error::Error;
use crate::lattice::{make_type, Surface};
use std::collections::BTreeMap;
use std::fmt;

/// The seven scroll types a polarized K3 surface can be deformed from.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum ScrollType {
    P2,
    E,
    H1,
    H2,
    F1,
    F41,
    F42,
}

impl fmt::Display for ScrollType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name())
    }
}

impl ScrollType {
    pub const ALL: [ScrollType; 7] = [
        ScrollType::P2,
        ScrollType::E,
        ScrollType::H1,
        ScrollType::H2,
        ScrollType::F1,
        ScrollType::F41,
        ScrollType::F42,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ScrollType::P2 => "P2",
            ScrollType::E => "E",
            ScrollType::H1 => "H(1)",
            ScrollType::H2 => "H(2)",
            ScrollType::F1 => "F1",
            ScrollType::F41 => "F4(1)",
            ScrollType::F42 => "F4(2)",
        }
    }

    pub fn parse(s: &str) -> Result<ScrollType, Error> {
        ScrollType::ALL
            .iter()
            .copied()
            .find(|t| t.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::InvalidDeformation(format!("unknown scroll type {s}")))
    }

    pub fn surface(self) -> Surface {
        match self {
            ScrollType::P2 => Surface::P2,
            ScrollType::E => Surface::Ellipsoid,
            ScrollType::H1 | ScrollType::H2 => Surface::Hyperboloid,
            ScrollType::F1 => Surface::F1,
            ScrollType::F41 | ScrollType::F42 => Surface::F4,
        }
    }

    /// Whether degree `n` admits this scroll type.
    pub fn contains(self, n: i64) -> bool {
        match self {
            ScrollType::P2 => n == 2,
            ScrollType::E => n == 4,
            ScrollType::H1 | ScrollType::H2 => n % 4 == 0 && n >= 4,
            ScrollType::F1 => n.rem_euclid(4) == 2 && n >= 6,
            ScrollType::F41 => n % 2 == 0 && n >= 4,
            ScrollType::F42 => n.rem_euclid(8) == 4 && n >= 12,
        }
    }

    /// Coefficients of the polarization class over the fixture's S basis.
    pub fn polarization(self, n: i64) -> Result<Vec<i64>, Error> {
        if !self.contains(n) {
            return Err(Error::InvalidDeformation(format!(
                "n = {n} does not admit type {self}"
            )));
        }
        let p = match self {
            ScrollType::P2 => vec![1],
            ScrollType::E => vec![1, 1],
            ScrollType::H1 => vec![n / 4, 1],
            ScrollType::H2 => vec![1, n / 4],
            ScrollType::F1 => vec![(n + 2) / 4, (2 - n) / 4],
            ScrollType::F41 => vec![n / 2 + 1, 1],
            ScrollType::F42 => vec![n / 4 + 2, 2],
        };
        let t = make_type(self.surface());
        assert_eq!(t.s.norm(&p), n, "polarization square");
        assert_eq!(gcd_vec(&p), 1, "polarization primitive");
        Ok(p)
    }
}

fn gcd_vec(v: &[i64]) -> i64 {
    v.iter().fold(0i64, |acc, &x| {
        let (mut a, mut b) = (acc.abs(), x.abs());
        while b != 0 {
            let t = a % b;
            a = b;
            b = t;
        }
        a
    })
}

/// Genus invariants of a polarized K3 surface of degree `n`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct PolarizedInvariant {
    pub n: i64,
    pub r: u8,
    pub a: u8,
    pub delta_p: u8,
    pub delta_phi: u8,
    pub delta_phi_p: u8,
}

impl fmt::Display for PolarizedInvariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({}; {},{},{},{},{})",
            self.n, self.r, self.a, self.delta_p, self.delta_phi, self.delta_phi_p
        )
    }
}

/// All scroll types admitting degree `n`.
pub fn members(n: i64) -> Result<Vec<ScrollType>, Error> {
    if n < 2 || n % 2 != 0 {
        return Err(Error::InvalidDeformation(format!(
            "degree must be a positive even integer, got {n}"
        )));
    }
    Ok(ScrollType::ALL.iter().copied().filter(|t| t.contains(n)).collect())
}

/// Apply the deformation to a census tuple, computing both routes and
/// insisting they agree.
pub fn apply_d(t: ScrollType, g: &GenusInvariant, n: i64) -> Result<PolarizedInvariant, Error> {
    if g.surface != t.surface() {
        return Err(Error::InvalidDeformation(format!(
            "tuple for {} fed to scroll type {}",
            g.surface, t
        )));
    }
    g.validate()?;
    let table = apply_d_table(t, g, n)?;
    let direct = apply_d_first_principles(t, g, n)?;
    if table != direct {
        return Err(Error::InvalidDeformation(format!(
            "case table {table} disagrees with direct rules {direct} on {g:?}"
        )));
    }
    Ok(table)
}

/// The per-type case table.
pub fn apply_d_table(
    t: ScrollType,
    g: &GenusInvariant,
    n: i64,
) -> Result<PolarizedInvariant, Error> {
    let dps = g.delta_phi_s;
    let dphi = g.delta_phi();
    let h = g.h_name();
    let v_is = |bits: &[u8]| matches!(&g.v, Some(v) if v.as_slice() == bits);
    let m8 = n.rem_euclid(8);

    let (delta_p, delta_phi, delta_phi_p) = match (t, h) {
        (ScrollType::P2, "0") => (1, dps, 1),
        (ScrollType::P2, "[h]") => (0, 1, dps),
        (ScrollType::E, "[e1+e2]") => {
            (0, dphi, u8::from(!(dps == 0 && v_is(&[1, 1]))))
        }
        (ScrollType::H1 | ScrollType::H2, "0") => (1, dps, 1),
        (ScrollType::H1 | ScrollType::H2, "S/2S") => (0, dps, 1),
        (ScrollType::H1, "[e1]") | (ScrollType::H2, "[e2]") => (1, dphi, 1),
        (ScrollType::H1, "[e2]") => (
            u8::from(m8 != 0),
            dphi,
            u8::from(!(m8 == 0 && dps == 0 && v_is(&[0, 1]))),
        ),
        (ScrollType::H2, "[e1]") => (
            u8::from(m8 != 0),
            dphi,
            u8::from(!(m8 == 0 && dps == 0 && v_is(&[1, 0]))),
        ),
        (ScrollType::H1 | ScrollType::H2, "[e1+e2]") => (
            u8::from(m8 != 4),
            dphi,
            u8::from(!(m8 == 4 && dps == 0 && v_is(&[1, 1]))),
        ),
        (ScrollType::F1, "0") => (1, dps, 1),
        (ScrollType::F1, "S/2S") => (0, 1, 1),
        (ScrollType::F1, "[h]") => {
            (u8::from(m8 != 2), 1, u8::from(!(m8 == 2 && dps == 0)))
        }
        (ScrollType::F1, "[e]") => {
            (u8::from(m8 != 6), 1, u8::from(!(m8 == 6 && dps == 0)))
        }
        (ScrollType::F1, "[h+e]") => (1, dphi, 1),
        (ScrollType::F41 | ScrollType::F42, "0") => (1, dps, 1),
        _ => {
            return Err(Error::InvalidDeformation(format!(
                "no rule for type {t} with H = {h}"
            )))
        }
    };
    Ok(PolarizedInvariant {
        n,
        r: g.r,
        a: g.a,
        delta_p,
        delta_phi,
        delta_phi_p,
    })
}

/// The first-principles rules: `delta_P = 0` when the polarization class
/// lies in `H` mod `2 S_-`, and `delta_phiP = 0` when it is congruent to
/// the characteristic element.
pub fn apply_d_first_principles(
    t: ScrollType,
    g: &GenusInvariant,
    n: i64,
) -> Result<PolarizedInvariant, Error> {
    let fixture = g.fixture();
    let p = t.polarization(n)?;
    let rank = fixture.s_rank();
    let in_h = fixture
        .subgroup(g.h)
        .elements(rank)
        .iter()
        .any(|e| {
            let diff: Vec<i64> = p.iter().zip(e).map(|(&pi, &ei)| pi - ei as i64).collect();
            fixture.in_double_minus(&diff)
        });
    let delta_p = u8::from(!in_h);
    let delta_phi_p = match &g.v {
        Some(v) if g.delta_phi_s == 0 => {
            let diff: Vec<i64> = p.iter().zip(v).map(|(&pi, &vi)| pi - vi as i64).collect();
            u8::from(!fixture.in_double_minus(&diff))
        }
        _ => 1,
    };
    Ok(PolarizedInvariant {
        n,
        r: g.r,
        a: g.a,
        delta_p,
        delta_phi: g.delta_phi(),
        delta_phi_p,
    })
}

/// Provenance of an image tuple: which scroll type and source tuple hit it.
pub type Sources = Vec<(ScrollType, GenusInvariant)>;

/// The full deformation image for degree `n`: every polarized invariant
/// reachable from some admissible scroll type, with provenance.
pub fn image(n: i64) -> Result<Vec<(PolarizedInvariant, Sources)>, Error> {
    let mut out: BTreeMap<PolarizedInvariant, Sources> = BTreeMap::new();
    for t in members(n)? {
        for g in census::census_for(t.surface()) {
            // The census is deduplicated under G; the polarization breaks
            // that symmetry, so expand the orbit before mapping.
            for gg in census::orbit(g) {
                let img = apply_d(t, &gg, n)?;
                out.entry(img).or_default().push((t, gg));
            }
        }
    }
    Ok(out
        .into_iter()
        .map(|(img, mut sources)| {
            sources.sort();
            sources.dedup();
            (img, sources)
        })
        .collect())
}

/// The two families of polarized invariants that cannot be reached once
/// the degree exceeds 4.
pub fn is_exception(p: &PolarizedInvariant) -> bool {
    p.n >= 6 && ((p.r, p.a) == (20, 2) || (p.r as i64 + p.a as i64 == 22 && p.delta_phi_p == 0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn membership_examples() {
        assert_eq!(members(2).unwrap(), vec![ScrollType::P2]);
        assert_eq!(
            members(4).unwrap(),
            vec![ScrollType::E, ScrollType::H1, ScrollType::H2, ScrollType::F41]
        );
        assert_eq!(
            members(12).unwrap(),
            vec![ScrollType::H1, ScrollType::H2, ScrollType::F41, ScrollType::F42]
        );
        assert!(members(3).is_err());
        assert!(members(0).is_err());
    }

    #[test]
    fn polarization_squares() {
        for t in ScrollType::ALL {
            for n in (2..=40).step_by(2) {
                if t.contains(n) {
                    let p = t.polarization(n).unwrap();
                    let fx = make_type(t.surface());
                    assert_eq!(fx.s.norm(&p), n);
                    assert_eq!(gcd_vec(&p), 1);
                }
            }
        }
    }

    #[test]
    fn surface_mismatch_rejected() {
        let g = census::census_for(Surface::P2)[0].clone();
        assert!(apply_d(ScrollType::E, &g, 4).is_err());
    }
}

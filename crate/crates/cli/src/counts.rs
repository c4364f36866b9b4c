//! The expected component counts for every surface, and the machinery that
//! re-derives the censuses and compares. Used by `check-counts` and the
//! acceptance suite.

use k3census::census::{self, Engine, GenusInvariant, TupleType};
use k3census::error::Error;
use k3census::lattice::Surface;

/// One verdict line of the count check.
pub struct CountLine {
    pub label: String,
    pub got: String,
    pub expected: String,
}

impl CountLine {
    pub fn pass(&self) -> bool {
        self.got == self.expected
    }

    pub fn render(&self) -> String {
        let verdict = if self.pass() {
            "PASS".to_string()
        } else {
            format!("FAIL (expected {})", self.expected)
        };
        format!("{}: {} {}", self.label, self.got, verdict)
    }
}

fn type_counts(census: &[GenusInvariant]) -> (usize, usize, usize) {
    let mut c = (0, 0, 0);
    for g in census {
        match g.tuple_type() {
            TupleType::Zero => c.0 += 1,
            TupleType::Ia => c.1 += 1,
            TupleType::Ib => c.2 += 1,
        }
    }
    c
}

fn h_type_counts(census: &[GenusInvariant], h_name: &str) -> (usize, usize, usize) {
    let filtered: Vec<GenusInvariant> = census
        .iter()
        .filter(|g| g.h_name() == h_name)
        .cloned()
        .collect();
    type_counts(&filtered)
}

/// Count identified classes, split by a key that the related map preserves.
fn identified_by<K: Ord>(
    census: &[GenusInvariant],
    key: impl Fn(&GenusInvariant) -> K,
) -> Result<Vec<(K, usize)>, Error> {
    let classes = census::identify_related(census)?;
    let mut counts: std::collections::BTreeMap<K, usize> = Default::default();
    for (a, _) in &classes.pairs {
        *counts.entry(key(a)).or_default() += 1;
    }
    for g in &classes.fixed {
        *counts.entry(key(g)).or_default() += 1;
    }
    Ok(counts.into_iter().collect())
}

/// Run every count comparison. Lines come out in a fixed order.
pub fn check_all() -> Result<Vec<CountLine>, Error> {
    let mut lines = Vec::new();
    let line = |label: &str, got: String, expected: &str| CountLine {
        label: label.to_string(),
        got,
        expected: expected.to_string(),
    };

    // Engine equivalence across all surfaces.
    let mut equal = true;
    for s in Surface::ALL {
        let gen = census::enumerate(s, Engine::Generic)?;
        let per = census::enumerate(s, Engine::PerCase)?;
        equal &= gen == per;
    }
    lines.push(line(
        "engine equivalence (5 surfaces)",
        if equal { "identical".into() } else { "MISMATCH".into() },
        "identical",
    ));

    // P2: counted per subgroup side (delta_h fixed).
    let p2 = census::census_for(Surface::P2);
    let (t0, ia, ib) = type_counts(p2);
    lines.push(line(
        "p2 per-side delta_phiS=1/delta_phiS=0",
        format!("{}/{}", ib / 2, t0),
        "49/15",
    ));
    debug_assert_eq!(ia, t0);
    lines.push(line("p2 total positive", format!("{}", p2.len()), "128"));
    let p2_classes = census::identify_related(p2)?;
    lines.push(line("p2 identified", format!("{}", p2_classes.class_count()), "64"));

    // Hyperboloid.
    let hy = census::census_for(Surface::Hyperboloid);
    let (t0, ia, ib) = type_counts(hy);
    lines.push(line("hyperboloid positive", format!("{t0}/{ia}/{ib}"), "42/23/144"));
    let by_type = identified_by(hy, |g| match g.tuple_type() {
        TupleType::Zero => 0u8,
        TupleType::Ia => 1,
        TupleType::Ib => 2,
    })?;
    let fmt_typed = |v: &[(u8, usize)]| {
        let pick = |k: u8| v.iter().find(|(t, _)| *t == k).map_or(0, |(_, n)| *n);
        format!("{}/{}/{}", pick(0), pick(1), pick(2))
    };
    lines.push(line("hyperboloid identified", fmt_typed(&by_type), "26/14/76"));

    // Ellipsoid.
    let el = census::census_for(Surface::Ellipsoid);
    let (t0, ia, ib) = type_counts(el);
    lines.push(line("ellipsoid positive", format!("{t0}/{ia}/{ib}"), "13/13/45"));
    let el_classes = census::identify_related(el)?;
    lines.push(line("ellipsoid identified", format!("{}", el_classes.class_count()), "38"));

    // F1: the six per-(H, type) families, then identified split by
    // delta_phiS.
    let f1 = census::census_for(Surface::F1);
    let h0 = h_type_counts(f1, "0");
    let hhe = h_type_counts(f1, "[h+e]");
    let hh = h_type_counts(f1, "[h]");
    let he = h_type_counts(f1, "[e]");
    let hs = h_type_counts(f1, "S/2S");
    lines.push(line(
        "f1 families 0(H=0)/0([h+e])/Ia([h])/Ib(H=0)/Ib([h])/Ib([h+e])",
        format!("{}/{}/{}/{}/{}/{}", h0.0, hhe.0, hh.1, h0.2, hh.2, hhe.2),
        "12/10/13/39/39/30",
    ));
    // The paired families mirror these counts.
    debug_assert_eq!((he.1, hs.1, hhe.1), (13, 12, 10));
    debug_assert_eq!((he.2, hs.2), (39, 39));
    let by_dps = identified_by(f1, |g| g.delta_phi_s)?;
    let pick = |v: &[(u8, usize)], k: u8| v.iter().find(|(t, _)| *t == k).map_or(0, |(_, n)| *n);
    lines.push(line(
        "f1 identified",
        format!("{}+{}", pick(&by_dps, 0), pick(&by_dps, 1)),
        "35+95",
    ));

    // F4.
    let f4 = census::census_for(Surface::F4);
    let (t0, _ia, ib) = type_counts(f4);
    lines.push(line("f4 positive", format!("{t0}/{ib}"), "14/49"));
    let by_phi = identified_by(f4, |g| g.delta_phi())?;
    lines.push(line(
        "f4 identified",
        format!("{}+{}", pick(&by_phi, 0), pick(&by_phi, 1)),
        "10+27",
    ));

    Ok(lines)
}

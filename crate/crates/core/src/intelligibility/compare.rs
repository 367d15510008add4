use std::fmt;

use serde::{Deserialize, Serialize};

use super::score::Counts;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ComparisonVerdict {
    FirstMoreTransparent,
    SecondMoreTransparent,
    NotSignificant,
}

impl ComparisonVerdict {
    pub fn swapped(self) -> Self {
        match self {
            ComparisonVerdict::FirstMoreTransparent => ComparisonVerdict::SecondMoreTransparent,
            ComparisonVerdict::SecondMoreTransparent => ComparisonVerdict::FirstMoreTransparent,
            ComparisonVerdict::NotSignificant => ComparisonVerdict::NotSignificant,
        }
    }
}

impl fmt::Display for ComparisonVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ComparisonVerdict::FirstMoreTransparent => "FirstMoreTransparent",
            ComparisonVerdict::SecondMoreTransparent => "SecondMoreTransparent",
            ComparisonVerdict::NotSignificant => "NotSignificant",
        })
    }
}

/// Counts reachable by moving each of `N_E`, `N_O` by at most one,
/// clamped to `N_E >= 0`, `N_O >= 1`.
fn perturbations(c: Counts) -> impl Iterator<Item = Counts> {
    let n_o = c.n_o.max(1);
    (-1i64..=1).flat_map(move |de| {
        (-1i64..=1).map(move |dobs| {
            Counts::new(
                c.n_e.saturating_add_signed(de),
                n_o.saturating_add_signed(dobs).max(1),
            )
        })
    })
}

/// Whether the ordering of two intelligibility values survives every ±1
/// perturbation of both statements' counts (81 combinations).
pub fn significantly_different(a: Counts, b: Counts) -> ComparisonVerdict {
    let mut always_greater = true;
    let mut always_less = true;
    for pa in perturbations(a) {
        let ia = pa.intelligibility();
        for pb in perturbations(b) {
            let ib = pb.intelligibility();
            always_greater &= ia > ib;
            always_less &= ia < ib;
        }
    }
    match (always_greater, always_less) {
        (true, _) => ComparisonVerdict::FirstMoreTransparent,
        (_, true) => ComparisonVerdict::SecondMoreTransparent,
        _ => ComparisonVerdict::NotSignificant,
    }
}

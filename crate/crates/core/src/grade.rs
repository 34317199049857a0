use core::fmt;
use core::str::FromStr;

/// The twelve grades of discrimination.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum GradeId {
    /// Identity.
    Id,
    /// Pairwise indiscernibility with identity (≈⁼ₚ).
    IndiscEqPair,
    /// Monadic indiscernibility with identity (≈⁼ₘ).
    IndiscEqMon,
    /// Complete indiscernibility without identity (≈⁻).
    IndiscNeqFull,
    /// Pairwise indiscernibility without identity (≈⁻ₚ).
    IndiscNeqPair,
    /// Monadic indiscernibility without identity (≈⁻ₘ).
    IndiscNeqMon,
    /// Total symmetry (≈ₜ).
    SymTotal,
    /// Pairwise symmetry (≈ₚ).
    SymPair,
    /// Bare symmetry (≈b).
    SymBare,
    /// Total relativity (~ₜ).
    RelTotal,
    /// Pairwise relativity (~ₚ).
    RelPair,
    /// Bare relativity (~b).
    RelBare,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    Identity,
    Indiscernibility,
    Symmetry,
    Relativity,
}

/// Strength of the point condition attached to a symmetry or relativity grade.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strength {
    Total,
    Pair,
    Bare,
}

impl GradeId {
    pub const ALL: [GradeId; 12] = [
        GradeId::Id,
        GradeId::IndiscEqPair,
        GradeId::IndiscEqMon,
        GradeId::IndiscNeqFull,
        GradeId::IndiscNeqPair,
        GradeId::IndiscNeqMon,
        GradeId::SymTotal,
        GradeId::SymPair,
        GradeId::SymBare,
        GradeId::RelTotal,
        GradeId::RelPair,
        GradeId::RelBare,
    ];

    /// The grades that are equivalence relations on every structure.
    pub const EQUIVALENCES: [GradeId; 8] = [
        GradeId::Id,
        GradeId::IndiscEqMon,
        GradeId::IndiscNeqFull,
        GradeId::IndiscNeqMon,
        GradeId::SymTotal,
        GradeId::SymBare,
        GradeId::RelTotal,
        GradeId::RelBare,
    ];

    /// Reflexive and symmetric, but not transitive in general.
    pub const PAIRWISE: [GradeId; 4] =
        [GradeId::IndiscEqPair, GradeId::IndiscNeqPair, GradeId::SymPair, GradeId::RelPair];

    pub fn index(self) -> usize {
        self as usize
    }

    /// The identifier used in JSON and on the command line.
    pub fn name(self) -> &'static str {
        match self {
            GradeId::Id => "id",
            GradeId::IndiscEqPair => "indiscEqPair",
            GradeId::IndiscEqMon => "indiscEqMon",
            GradeId::IndiscNeqFull => "indiscNeqFull",
            GradeId::IndiscNeqPair => "indiscNeqPair",
            GradeId::IndiscNeqMon => "indiscNeqMon",
            GradeId::SymTotal => "symTotal",
            GradeId::SymPair => "symPair",
            GradeId::SymBare => "symBare",
            GradeId::RelTotal => "relTotal",
            GradeId::RelPair => "relPair",
            GradeId::RelBare => "relBare",
        }
    }

    /// Mathematical notation.
    pub fn symbol(self) -> &'static str {
        match self {
            GradeId::Id => "=",
            GradeId::IndiscEqPair => "≈⁼ₚ",
            GradeId::IndiscEqMon => "≈⁼ₘ",
            GradeId::IndiscNeqFull => "≈⁻",
            GradeId::IndiscNeqPair => "≈⁻ₚ",
            GradeId::IndiscNeqMon => "≈⁻ₘ",
            GradeId::SymTotal => "≈ₜ",
            GradeId::SymPair => "≈ₚ",
            GradeId::SymBare => "≈b",
            GradeId::RelTotal => "~ₜ",
            GradeId::RelPair => "~ₚ",
            GradeId::RelBare => "~b",
        }
    }

    pub fn family(self) -> Family {
        match self {
            GradeId::Id => Family::Identity,
            GradeId::IndiscEqPair
            | GradeId::IndiscEqMon
            | GradeId::IndiscNeqFull
            | GradeId::IndiscNeqPair
            | GradeId::IndiscNeqMon => Family::Indiscernibility,
            GradeId::SymTotal | GradeId::SymPair | GradeId::SymBare => Family::Symmetry,
            GradeId::RelTotal | GradeId::RelPair | GradeId::RelBare => Family::Relativity,
        }
    }

    /// Point condition of a symmetry or relativity grade.
    pub fn strength(self) -> Option<Strength> {
        match self {
            GradeId::SymTotal | GradeId::RelTotal => Some(Strength::Total),
            GradeId::SymPair | GradeId::RelPair => Some(Strength::Pair),
            GradeId::SymBare | GradeId::RelBare => Some(Strength::Bare),
            _ => None,
        }
    }

    pub fn is_equivalence(self) -> bool {
        GradeId::EQUIVALENCES.contains(&self)
    }
}

impl fmt::Display for GradeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnknownGrade;

impl fmt::Display for UnknownGrade {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("unknown grade")
    }
}

impl FromStr for GradeId {
    type Err = UnknownGrade;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        GradeId::ALL.into_iter().find(|g| g.name() == s || g.symbol() == s).ok_or(UnknownGrade)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        for g in GradeId::ALL {
            assert_eq!(g.name().parse::<GradeId>(), Ok(g));
            assert_eq!(GradeId::ALL[g.index()], g);
        }
    }

    #[test]
    fn eight_equivalences_four_pairwise() {
        let eq = GradeId::ALL.iter().filter(|g| g.is_equivalence()).count();
        assert_eq!(eq, 8);
        assert!(GradeId::PAIRWISE.iter().all(|g| !g.is_equivalence()));
    }
}

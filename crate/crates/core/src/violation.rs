use std::fmt;

/// The axiom a candidate structure failed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Identity {
    DifferentialDegree,
    StructureDegree,
    UnitDegree,
    DifferentialSquare,
    Leibniz,
    Associativity,
    Unit,
    Antisymmetry,
    Jacobi,
    Coassociativity,
    Counit,
    Coaugmentation,
    Coderivation,
    Cocommutativity,
    ActionAssociativity,
    ActionUnit,
}

impl fmt::Display for Identity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Identity::DifferentialDegree => "differential not of degree -1",
            Identity::StructureDegree => "structure map not of the required degree",
            Identity::UnitDegree => "unit not of degree 0",
            Identity::DifferentialSquare => "differential does not square to zero",
            Identity::Leibniz => "Leibniz rule fails",
            Identity::Associativity => "associativity fails",
            Identity::Unit => "unit law fails",
            Identity::Antisymmetry => "graded antisymmetry fails",
            Identity::Jacobi => "graded Jacobi identity fails",
            Identity::Coassociativity => "coassociativity fails",
            Identity::Counit => "counit law fails",
            Identity::Coaugmentation => "coaugmentation is not a coalgebra map",
            Identity::Coderivation => "differential is not a coderivation",
            Identity::Cocommutativity => "coproduct is not cocommutative",
            Identity::ActionAssociativity => "module action is not associative",
            Identity::ActionUnit => "unit does not act as the identity",
        };
        f.write_str(s)
    }
}

/// First failing identity of a candidate structure, with the basis elements
/// it fails on.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub struct Violation {
    pub identity: Identity,
    pub basis: Vec<String>,
}

impl Violation {
    pub(crate) fn new(identity: Identity, basis: &[&str]) -> Self {
        Violation { identity, basis: basis.iter().map(|s| s.to_string()).collect() }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.basis.is_empty() {
            write!(f, "{}", self.identity)
        } else {
            write!(f, "{} on ({})", self.identity, self.basis.join(", "))
        }
    }
}

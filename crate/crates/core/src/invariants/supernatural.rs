use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, Zero};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Exponent {
    Finite(u64),
    Infinite,
}

impl Exponent {
    pub fn plus(self, other: Exponent) -> Exponent {
        match (self, other) {
            (Exponent::Finite(a), Exponent::Finite(b)) => Exponent::Finite(a + b),
            _ => Exponent::Infinite,
        }
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Exponent::Finite(e) => write!(f, "{e}"),
            Exponent::Infinite => f.write_str("inf"),
        }
    }
}

/// A formal product `prod p^{e_p}` over primes, each exponent a natural
/// number or infinity. Primes with exponent 0 are not stored.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct SupernaturalNumber {
    exponents: BTreeMap<BigUint, Exponent>,
}

impl SupernaturalNumber {
    pub fn one() -> Self {
        Self::default()
    }

    /// The prime factorization of `n`, which must be nonzero.
    pub fn of(n: &BigUint) -> Self {
        assert!(!n.is_zero(), "zero has no factorization");
        let mut s = Self::one();
        if !n.is_one() {
            for (p, e) in num_prime::nt_funcs::factorize(n.clone()) {
                s.exponents.insert(p, Exponent::Finite(e as u64));
            }
        }
        s
    }

    pub fn exponent(&self, p: &BigUint) -> Exponent {
        self.exponents.get(p).copied().unwrap_or(Exponent::Finite(0))
    }

    /// Sets the exponent of `p`, which the caller guarantees is prime.
    pub fn set(&mut self, p: BigUint, e: Exponent) {
        if e == Exponent::Finite(0) {
            self.exponents.remove(&p);
        } else {
            self.exponents.insert(p, e);
        }
    }

    pub fn multiply(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (p, &e) in &other.exponents {
            let sum = out.exponent(p).plus(e);
            out.set(p.clone(), sum);
        }
        out
    }

    pub fn iter(&self) -> impl Iterator<Item = (&BigUint, Exponent)> {
        self.exponents.iter().map(|(p, &e)| (p, e))
    }

    pub fn is_one(&self) -> bool {
        self.exponents.is_empty()
    }

    pub fn infinite_primes(&self) -> BTreeSet<&BigUint> {
        self.iter().filter(|(_, e)| *e == Exponent::Infinite).map(|(p, _)| p).collect()
    }

    /// Equality up to finitely many primes, each changed by a finite amount.
    ///
    /// Two rank-1 torsion-free groups are isomorphic exactly when their
    /// types agree in this sense. Sketch: the colimit of `Z --m_1--> Z --> ...`
    /// is the subgroup of `Q` generated by `1 / (m_1 ... m_t)`, so `p^e`
    /// divides `1` in it iff `e` is at most the exponent of `p`. An
    /// isomorphism between subgroups of `Q` is multiplication by some
    /// `a / b`, which moves the exponents only at the primes of `a` and `b`,
    /// each by a finite amount; conversely, finitely many finite changes are
    /// undone by such a multiplication.
    ///
    /// Stored values have finitely many finite exponents, so this reduces to
    /// comparing where the exponent is infinite.
    pub fn equivalent(&self, other: &Self) -> bool {
        self.infinite_primes() == other.infinite_primes()
    }
}

impl fmt::Display for SupernaturalNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (n, (p, e)) in self.iter().enumerate() {
            if n > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{p}^{e}")?;
        }
        f.write_str("}")
    }
}

use std::collections::BTreeSet;

/// A dyadic share of the termination weight, stored exactly as a set of
/// distinct exponents `e` standing for `Σ 2^-e`.
///
/// The root worker starts with the full weight 1. Work shipped between
/// workers carries a share; an idle worker hands its whole share back to
/// the root. The root holding weight 1 while idle means no worker holds
/// work and no work is in flight.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Credit {
    terms: BTreeSet<u32>,
}

impl Credit {
    pub fn full() -> Self {
        Credit {
            terms: BTreeSet::from([0]),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.terms.len() == 1 && self.terms.contains(&0)
    }

    /// Adds `2^-exp`, carrying equal terms upward.
    pub fn add_term(&mut self, mut exp: u32) {
        while self.terms.remove(&exp) {
            assert!(exp > 0, "termination credit exceeded 1");
            exp -= 1;
        }
        self.terms.insert(exp);
    }

    pub fn absorb(&mut self, other: Credit) {
        for e in other.terms {
            self.add_term(e);
        }
    }

    /// Halves the smallest term and returns the exponent of the half given away.
    pub fn split_off(&mut self) -> u32 {
        let e = self.terms.pop_last().expect("cannot split zero credit");
        self.terms.insert(e + 1);
        e + 1
    }

    /// Removes and returns the whole share.
    pub fn take(&mut self) -> Credit {
        std::mem::take(self)
    }
}

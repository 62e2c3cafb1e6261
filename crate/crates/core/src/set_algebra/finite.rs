use std::fmt;

/// A subset of `n ≤ 64` atoms as a bitmask. Every mask below `2^n` is valid.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct FiniteSubset {
    mask: u64,
    atoms: u32,
}

pub const MAX_ATOMS: u32 = 64;

impl FiniteSubset {
    pub(crate) fn new(mask: u64, atoms: u32) -> Self {
        debug_assert!(atoms <= MAX_ATOMS && mask & !full_mask(atoms) == 0);
        FiniteSubset { mask, atoms }
    }

    pub fn mask(&self) -> u64 {
        self.mask
    }

    pub fn atom_count(&self) -> u32 {
        self.atoms
    }

    pub fn contains(&self, atom: u32) -> bool {
        atom < self.atoms && self.mask >> atom & 1 == 1
    }

    pub fn members(&self) -> impl Iterator<Item = u32> + '_ {
        (0..self.atoms).filter(|&a| self.contains(a))
    }

    pub(crate) fn complement(&self) -> Self {
        FiniteSubset::new(!self.mask & full_mask(self.atoms), self.atoms)
    }
}

pub(crate) fn full_mask(atoms: u32) -> u64 {
    if atoms >= 64 {
        u64::MAX
    } else {
        (1u64 << atoms) - 1
    }
}

impl fmt::Debug for FiniteSubset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.members().map(|a| format!("a{a}"))).finish()
    }
}

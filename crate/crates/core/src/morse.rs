//! Handle bookkeeping for the complement of a union of totally geodesic
//! submanifolds in a ball: a component of codimension `k + 1` contributes one
//! `k`-handle.

use std::collections::BTreeMap;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MorseError {
    #[error("component {index} has codimension {codim}; at least 2 is required")]
    BadCodim { index: usize, codim: u32 },
    #[error("the complement is not aspherical")]
    NotAspherical,
}

/// Codimensions of the components. `countable` marks a census truncated
/// from a countably infinite family.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct StratumData {
    pub codims: Vec<u32>,
    pub countable: bool,
}

impl StratumData {
    pub fn new(codims: Vec<u32>) -> Result<Self, MorseError> {
        let s = Self {
            codims,
            countable: false,
        };
        s.validate()?;
        Ok(s)
    }

    pub fn countable(codims: Vec<u32>) -> Result<Self, MorseError> {
        let s = Self {
            codims,
            countable: true,
        };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<(), MorseError> {
        match self.codims.iter().position(|&c| c < 2) {
            Some(index) => Err(MorseError::BadCodim {
                index,
                codim: self.codims[index],
            }),
            None => Ok(()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KernelRank {
    Finite(usize),
    CountablyInfinite,
}

/// Handle index → number of handles.
pub fn handle_decomposition(s: &StratumData) -> Result<BTreeMap<u32, usize>, MorseError> {
    s.validate()?;
    let mut handles = BTreeMap::new();
    for &c in &s.codims {
        *handles.entry(c - 1).or_insert(0) += 1;
    }
    Ok(handles)
}

pub fn is_aspherical(s: &StratumData) -> bool {
    s.codims.iter().all(|&c| c == 2)
}

/// Rank of the free fundamental group of the complement.
pub fn kernel_rank(s: &StratumData) -> Result<KernelRank, MorseError> {
    s.validate()?;
    if !is_aspherical(s) {
        return Err(MorseError::NotAspherical);
    }
    Ok(if s.countable {
        KernelRank::CountablyInfinite
    } else {
        KernelRank::Finite(s.codims.len())
    })
}

/// Dimensions of the spheres in the wedge the complement retracts onto.
pub fn homotopy_type(s: &StratumData) -> Result<Vec<u32>, MorseError> {
    s.validate()?;
    let mut spheres: Vec<u32> = s.codims.iter().map(|c| c - 1).collect();
    spheres.sort_unstable();
    Ok(spheres)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(c: &[u32]) -> StratumData {
        StratumData::new(c.to_vec()).unwrap()
    }

    #[test]
    fn examples() {
        assert_eq!(
            handle_decomposition(&s(&[2, 2, 2])).unwrap(),
            BTreeMap::from([(1, 3)])
        );
        assert_eq!(
            handle_decomposition(&s(&[2, 3])).unwrap(),
            BTreeMap::from([(1, 1), (2, 1)])
        );
        assert!(handle_decomposition(&s(&[])).unwrap().is_empty());
        assert!(is_aspherical(&s(&[2, 2])));
        assert!(!is_aspherical(&s(&[2, 3])));
        assert!(is_aspherical(&s(&[])));
        assert_eq!(kernel_rank(&s(&[2, 2, 2])), Ok(KernelRank::Finite(3)));
        assert_eq!(kernel_rank(&s(&[2])), Ok(KernelRank::Finite(1)));
        assert_eq!(kernel_rank(&s(&[2, 3])), Err(MorseError::NotAspherical));
        let inf = StratumData::countable(vec![2, 2]).unwrap();
        assert_eq!(kernel_rank(&inf), Ok(KernelRank::CountablyInfinite));
        assert_eq!(homotopy_type(&s(&[2, 2])).unwrap(), vec![1, 1]);
        assert_eq!(homotopy_type(&s(&[4])).unwrap(), vec![3]);
        assert!(homotopy_type(&s(&[])).unwrap().is_empty());
        assert_eq!(
            StratumData::new(vec![2, 1]),
            Err(MorseError::BadCodim { index: 1, codim: 1 })
        );
    }
}

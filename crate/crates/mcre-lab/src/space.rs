//! Mixed-radix indexing of joint (per-agent) values.
//!
//! A joint value over `arity` agents, each component in `0..base`, is stored
//! as a single integer in `0..base^arity`. Component 0 is the most
//! significant digit, so enumeration order is lexicographic in agent order.

use crate::{Error, Result};

/// Index codec for the product space `{0..base}^arity`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct JointSpace {
    base: usize,
    arity: usize,
    count: usize,
}

impl JointSpace {
    pub fn new(base: usize, arity: usize) -> Result<Self> {
        if base == 0 || arity == 0 {
            return Err(Error::Dimension(format!(
                "joint space needs base >= 1 and arity >= 1, got base {base}, arity {arity}"
            )));
        }
        let mut count: usize = 1;
        for _ in 0..arity {
            count = count.checked_mul(base).ok_or_else(|| {
                Error::Dimension(format!("joint space {base}^{arity} overflows usize"))
            })?;
        }
        Ok(JointSpace { base, arity, count })
    }

    pub fn base(&self) -> usize {
        self.base
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    /// Total number of joint values, `base^arity`.
    pub fn count(&self) -> usize {
        self.count
    }

    /// Component of agent `agent` inside joint index `idx`.
    pub fn component(&self, idx: usize, agent: usize) -> usize {
        debug_assert!(idx < self.count && agent < self.arity);
        let shift = self.base.pow((self.arity - 1 - agent) as u32);
        (idx / shift) % self.base
    }

    /// Decode a joint index into per-agent components.
    pub fn decode(&self, idx: usize) -> Vec<usize> {
        (0..self.arity).map(|a| self.component(idx, a)).collect()
    }

    /// Encode per-agent components into a joint index.
    pub fn encode(&self, components: &[usize]) -> Result<usize> {
        if components.len() != self.arity {
            return Err(Error::Dimension(format!(
                "expected {} components, got {}",
                self.arity,
                components.len()
            )));
        }
        let mut idx = 0;
        for &c in components {
            if c >= self.base {
                return Err(Error::Dimension(format!(
                    "component {c} out of range 0..{}",
                    self.base
                )));
            }
            idx = idx * self.base + c;
        }
        Ok(idx)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let s = JointSpace::new(3, 2).unwrap();
        assert_eq!(s.count(), 9);
        for idx in 0..9 {
            let comps = s.decode(idx);
            assert_eq!(s.encode(&comps).unwrap(), idx);
        }
        // lexicographic: (0,0), (0,1), (0,2), (1,0), ...
        assert_eq!(s.decode(3), vec![1, 0]);
        assert_eq!(s.component(5, 0), 1);
        assert_eq!(s.component(5, 1), 2);
    }

    #[test]
    fn rejects_bad_components() {
        let s = JointSpace::new(2, 2).unwrap();
        assert!(s.encode(&[0]).is_err());
        assert!(s.encode(&[0, 2]).is_err());
        assert!(JointSpace::new(0, 1).is_err());
    }
}

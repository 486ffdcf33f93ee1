//! Odometer versus coordinatewise flips on `{0,1}^N`, truncated to `N`
//! bits. Points are `u64` read least significant bit first, so bit `i`
//! of the integer is coordinate `i`.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};

/// `{0,1}^N` with uniform weights.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CylinderSpace {
    pub bits: u32,
}

impl CylinderSpace {
    pub fn new(bits: u32) -> Result<Self> {
        if bits == 0 || bits > 63 {
            return Err(Error::Invalid(format!("bit depth {bits} outside 1..=63")));
        }
        Ok(CylinderSpace { bits })
    }

    pub fn size(&self) -> u64 {
        1 << self.bits
    }

    pub fn points(&self) -> impl Iterator<Item = u64> {
        0..self.size()
    }

    pub fn weight(&self) -> f64 {
        1.0 / self.size() as f64
    }

    /// Add one with carry; `None` at the all-ones point.
    pub fn odometer(&self, x: u64) -> Option<u64> {
        (x + 1 < self.size()).then_some(x + 1)
    }

    /// `k` steps of the odometer (negative steps run it backwards).
    pub fn odometer_pow(&self, x: u64, k: i64) -> Option<u64> {
        let y = x as i128 + k as i128;
        (0..self.size() as i128).contains(&y).then_some(y as u64)
    }

    pub fn check_support(&self, s: Support) -> Result<()> {
        if s.0 >> self.bits != 0 {
            return Err(Error::SupportTooLarge(format!("{s} on {} bits", self.bits)));
        }
        Ok(())
    }

    pub fn flip(&self, s: Support, x: u64) -> Result<u64> {
        self.check_support(s)?;
        Ok(x ^ s.0)
    }

    /// The `k` with `odometer^k(x) = flip(s, x)`.
    pub fn oe_cocycle(&self, s: Support, x: u64) -> Result<i64> {
        let y = self.flip(s, x)?;
        Ok(y as i64 - x as i64)
    }

    /// The flip taking `x` to `odometer^k(x)`, if that stays in the truncation.
    pub fn inverse_cocycle(&self, k: i64, x: u64) -> Option<Support> {
        self.odometer_pow(x, k).map(|y| Support(x ^ y))
    }

    pub fn linfty_bound(&self, s: Support) -> Result<u64> {
        self.check_support(s)?;
        Ok(self.points().map(|x| (((x ^ s.0) as i64) - x as i64).unsigned_abs()).max().unwrap_or(0))
    }

    pub fn act(&self, g: Generator, x: u64) -> Option<u64> {
        match g {
            Generator::Shift(k) => self.odometer_pow(x, k),
            Generator::Flip(s) => self.flip(s, x).ok(),
        }
    }

    /// Tabulates `c(s, ·)` for each support on every point.
    pub fn cocycle_table(&self, supports: &[Support]) -> Result<CocycleTable> {
        let mut values = BTreeMap::new();
        for &s in supports {
            self.check_support(s)?;
            let row = self.points().map(|x| self.oe_cocycle(s, x).ok()).collect();
            values.insert(s, row);
        }
        Ok(CocycleTable { bits: self.bits, values })
    }

    /// `{g ∈ ball : g·x ∈ Z}`.
    pub fn return_set(&self, x: u64, z: &dyn Fn(u64) -> bool, ball: &[Generator]) -> Vec<Generator> {
        ball.iter().copied().filter(|&g| self.act(g, x).is_some_and(z)).collect()
    }
}

/// A finite subset of coordinates, as a bit mask.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Support(pub u64);

impl Support {
    pub fn from_bits(bits: &[u32]) -> Result<Self> {
        let mut m = 0u64;
        for &b in bits {
            if b >= 64 {
                return Err(Error::SupportTooLarge(format!("coordinate {b}")));
            }
            m ^= 1 << b;
        }
        Ok(Support(m))
    }

    pub fn single(k: u32) -> Self {
        Support(1 << k)
    }

    /// The group law of `⊕ℤ/2`: symmetric difference.
    pub fn sum(self, other: Support) -> Support {
        Support(self.0 ^ other.0)
    }

    pub fn bits(self) -> Vec<u32> {
        (0..64).filter(|i| self.0 >> i & 1 == 1).collect()
    }

    /// Reads `{0,2}` or `0,2`.
    pub fn parse(text: &str) -> Result<Self> {
        let t = text.trim().trim_start_matches('{').trim_end_matches('}');
        let bits: Vec<u32> = t
            .split(',')
            .map(str::trim)
            .filter(|p| !p.is_empty())
            .map(|p| p.parse().map_err(|_| Error::Invalid(format!("bad coordinate `{p}`"))))
            .collect::<Result<_>>()?;
        Support::from_bits(&bits)
    }
}

impl fmt::Display for Support {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.bits().iter().map(|b| b.to_string()).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

/// An element of `ℤ` (odometer power) or of `⊕ℤ/2` (flip).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Generator {
    Shift(i64),
    Flip(Support),
}

/// `c(s, x)` for the supports tabulated, one row per support. `None`
/// marks an overflow: the orbit path leaves the truncation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CocycleTable {
    pub bits: u32,
    pub values: BTreeMap<Support, Vec<Option<i64>>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LawViolation {
    pub s1: Support,
    pub s2: Support,
    pub x: u64,
    pub lhs: i64,
    pub rhs: i64,
}

#[derive(Clone, Debug)]
pub struct LawReport {
    pub holds: bool,
    pub checked: u64,
    pub overflow_skipped: u64,
    pub violations: Vec<LawViolation>,
}

impl CocycleTable {
    /// `c(s, x)`; the empty support is always `0`.
    pub fn get(&self, s: Support, x: u64) -> Option<i64> {
        if s.0 == 0 {
            return Some(0);
        }
        *self.values.get(&s)?.get(x as usize)?
    }

    pub fn is_tabulated(&self, s: Support) -> bool {
        s.0 == 0 || self.values.contains_key(&s)
    }

    /// `c(s1 s2, x) = c(s1, s2·x) + c(s2, x)` over every pair of tabulated
    /// supports whose sum is tabulated, at every point.
    pub fn law_check(&self) -> LawReport {
        let mut violations = Vec::new();
        let (mut checked, mut overflow_skipped) = (0, 0);
        let supports: Vec<Support> = self.values.keys().copied().collect();
        for &s1 in &supports {
            for &s2 in &supports {
                let prod = s1.sum(s2);
                if !self.is_tabulated(prod) {
                    continue;
                }
                for x in 0..1u64 << self.bits {
                    let (Some(lhs), Some(a), Some(b)) = (self.get(prod, x), self.get(s1, x ^ s2.0), self.get(s2, x)) else {
                        overflow_skipped += 1;
                        continue;
                    };
                    let rhs = a + b;
                    checked += 1;
                    if lhs != rhs && violations.len() < 16 {
                        violations.push(LawViolation { s1, s2, x, lhs, rhs });
                    }
                }
            }
        }
        LawReport { holds: violations.is_empty(), checked, overflow_skipped, violations }
    }

    /// `c'(s, x) = φ(s·x) + c(s, x) − φ(x)`.
    pub fn cohomologous(&self, phi: &dyn Fn(u64) -> i64) -> CocycleTable {
        let values = self
            .values
            .iter()
            .map(|(&s, row)| (s, row.iter().enumerate().map(|(x, c)| c.map(|c| phi(x as u64 ^ s.0) + c - phi(x as u64))).collect()))
            .collect();
        CocycleTable { bits: self.bits, values }
    }

    pub fn sup_norm(&self, s: Support) -> Option<u64> {
        self.values.get(&s).map(|row| row.iter().flatten().map(|c| c.unsigned_abs()).max().unwrap_or(0))
    }
}

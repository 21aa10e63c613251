//! Subsets of an indexed universe (positive roots, hyperplanes) as `u128`
//! bit masks. Bit `i` stands for element `i`.

pub type Mask = u128;

pub fn full(n: usize) -> Mask {
    if n >= 128 {
        Mask::MAX
    } else {
        (1u128 << n) - 1
    }
}

pub fn bit(i: usize) -> Mask {
    1u128 << i
}

pub fn contains(m: Mask, i: usize) -> bool {
    m >> i & 1 == 1
}

pub fn count(m: Mask) -> usize {
    m.count_ones() as usize
}

pub fn lowest(m: Mask) -> Option<usize> {
    (m != 0).then(|| m.trailing_zeros() as usize)
}

/// Indices of set bits in increasing order.
pub fn bits(m: Mask) -> Bits {
    Bits(m)
}

#[derive(Clone, Copy)]
pub struct Bits(Mask);

impl Iterator for Bits {
    type Item = usize;
    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let i = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(i)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = self.0.count_ones() as usize;
        (n, Some(n))
    }
}

pub fn from_indices<I: IntoIterator<Item = usize>>(it: I) -> Mask {
    it.into_iter().fold(0, |m, i| m | bit(i))
}

/// Compact hex rendering keyed to the root order: bit `i` is root `i`.
pub fn to_hex(m: Mask) -> String {
    format!("0x{m:x}")
}

pub fn from_hex(s: &str) -> Option<Mask> {
    let t = s.trim();
    let t = t.strip_prefix("0x").or_else(|| t.strip_prefix("0X")).unwrap_or(t);
    Mask::from_str_radix(t, 16).ok()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn iterate_bits() {
        let m = from_indices([0, 5, 127]);
        assert_eq!(bits(m).collect::<Vec<_>>(), vec![0, 5, 127]);
        assert_eq!(count(m), 3);
        assert_eq!(lowest(m), Some(0));
        assert_eq!(lowest(0), None);
        assert_eq!(full(128), Mask::MAX);
        assert_eq!(from_hex(&to_hex(m)), Some(m));
    }
}

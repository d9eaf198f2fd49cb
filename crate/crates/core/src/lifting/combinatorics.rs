//! Index sets for the correction terms: marked intervals, even sequences and
//! their compressions, marked circles.

use std::fmt;

/// Interval with integral points `1, …, k−1` and `l` marked points, any two of
/// them at distance at least 2. Marks are 1-based and strictly increasing.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MarkedInterval {
    k: usize,
    marks: Vec<usize>,
}

impl MarkedInterval {
    pub fn new(k: usize, marks: Vec<usize>) -> Option<Self> {
        let in_range = marks.iter().all(|&m| m >= 1 && m < k);
        let spaced = marks.windows(2).all(|w| w[1] >= w[0] + 2);
        (in_range && spaced).then_some(MarkedInterval { k, marks })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn marks(&self) -> &[usize] {
        &self.marks
    }

    pub fn is_marked(&self, point: usize) -> bool {
        self.marks.binary_search(&point).is_ok()
    }
}

/// All marked intervals for `k` derivations with exactly `l` marks, in
/// lexicographic order of the mark lists.
pub fn enumerate_marked_intervals(k: usize, l: usize) -> Vec<MarkedInterval> {
    fn go(k: usize, l: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<MarkedInterval>) {
        if cur.len() == l {
            out.push(MarkedInterval { k, marks: cur.clone() });
            return;
        }
        for p in start..k {
            cur.push(p);
            go(k, l, p + 2, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if l == 0 || k < 2 {
        return out;
    }
    go(k, l, 1, &mut Vec::new(), &mut out);
    out
}

/// A 0/1 sequence of length `k + 2s` with `a₁ = 1`, `k` ones, `2s` zeros and an
/// even number of zeros between cyclically adjacent ones.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EvenSequence {
    bits: Vec<u8>,
    k: usize,
    s: usize,
}

impl EvenSequence {
    pub fn new(bits: Vec<u8>) -> Option<Self> {
        let k = bits.iter().filter(|&&b| b == 1).count();
        let zeros = bits.len() - k;
        let valid = bits.first() == Some(&1)
            && bits.iter().all(|&b| b <= 1)
            && zeros.is_multiple_of(2)
            && zeros > 0
            && cyclic_zero_runs(&bits).iter().all(|r| r % 2 == 0);
        valid.then_some(EvenSequence { bits, k, s: zeros / 2 })
    }

    pub fn bits(&self) -> &[u8] {
        &self.bits
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn s(&self) -> usize {
        self.s
    }

    /// Shortens the first run of zeros by one.
    ///
    /// With `s₁` the first zero and `s₂` the next one after it, positions
    /// `s₁ … s₂−2` stay zero and the rest shifts left by one. When the first
    /// zero run is the cyclic tail there is no later one; the run is then
    /// regarded as preceding `a₁` on the circle and is shortened there, which
    /// again just drops one of its zeros.
    pub fn compress(&self) -> CompressedSequence {
        let first_zero = self.bits.iter().position(|&b| b == 0).expect("has zeros");
        let mut bits = self.bits.clone();
        bits.remove(first_zero);
        CompressedSequence {
            bits,
            first_zero: first_zero + 1,
        }
    }
}

/// Lengths of the zero runs following each 1, read cyclically.
fn cyclic_zero_runs(bits: &[u8]) -> Vec<usize> {
    let ones: Vec<usize> = bits
        .iter()
        .enumerate()
        .filter(|(_, &b)| b == 1)
        .map(|(i, _)| i)
        .collect();
    let len = bits.len();
    (0..ones.len())
        .map(|t| {
            let next = ones[(t + 1) % ones.len()];
            let gap = (next + len - ones[t]) % len;
            if gap == 0 {
                len - 1
            } else {
                gap - 1
            }
        })
        .collect()
}

/// Every even sequence for `k` ones and `2s` zeros, in lexicographic order.
pub fn enumerate_even_sequences(k: usize, s: usize) -> Vec<EvenSequence> {
    // zero runs after each 1 are 2·g_t with g_1 + … + g_k = s
    fn compositions(parts: usize, total: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if parts == 1 {
            cur.push(total);
            out.push(cur.clone());
            cur.pop();
            return;
        }
        for g in 0..=total {
            cur.push(g);
            compositions(parts - 1, total - g, cur, out);
            cur.pop();
        }
    }
    if k == 0 || s == 0 {
        return Vec::new();
    }
    let mut gaps = Vec::new();
    compositions(k, s, &mut Vec::new(), &mut gaps);
    let mut out: Vec<EvenSequence> = gaps
        .into_iter()
        .map(|g| {
            let mut bits = Vec::with_capacity(k + 2 * s);
            for gt in g {
                bits.push(1);
                bits.extend(std::iter::repeat_n(0, 2 * gt));
            }
            EvenSequence { bits, k, s }
        })
        .collect();
    out.sort();
    out
}

/// An even sequence with its first zero run shortened; `first_zero` is the
/// 1-based position `s₁` of the first zero in the source sequence.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CompressedSequence {
    bits: Vec<u8>,
    first_zero: usize,
}

impl CompressedSequence {
    pub fn bits(&self) -> &[u8] {
        &self.bits
    }

    pub fn first_zero(&self) -> usize {
        self.first_zero
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    /// `(−1)^{s₁}`.
    pub fn sign(&self) -> i64 {
        if self.first_zero.is_multiple_of(2) {
            1
        } else {
            -1
        }
    }

    /// Positions (1-based) `i` with `ã_i = ã_{i+1} = 1`, where `ã_{len+1} = ã_1`.
    pub fn markable(&self) -> Vec<usize> {
        let len = self.bits.len();
        (0..len)
            .filter(|&i| self.bits[i] == 1 && self.bits[(i + 1) % len] == 1)
            .map(|i| i + 1)
            .collect()
    }
}

impl fmt::Display for CompressedSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in &self.bits {
            write!(f, "{b}")?;
        }
        Ok(())
    }
}

/// A circle with `length` integral points, `marks` (1-based) at pairwise
/// circular distance at least 2, each mark at a markable position of the
/// parent compressed sequence.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MarkedCircle {
    length: usize,
    marks: Vec<usize>,
}

impl MarkedCircle {
    pub fn length(&self) -> usize {
        self.length
    }

    pub fn marks(&self) -> &[usize] {
        &self.marks
    }
}

fn circular_distance(a: usize, b: usize, len: usize) -> usize {
    let d = a.abs_diff(b);
    d.min(len - d)
}

/// Marked circles with exactly `l` marks over the compressed sequence.
pub fn enumerate_marked_circles(parent: &CompressedSequence, l: usize) -> Vec<MarkedCircle> {
    fn go(cand: &[usize], len: usize, l: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<MarkedCircle>) {
        if cur.len() == l {
            out.push(MarkedCircle {
                length: len,
                marks: cur.clone(),
            });
            return;
        }
        for i in start..cand.len() {
            let p = cand[i];
            if cur.iter().all(|&q| circular_distance(p, q, len) >= 2) {
                cur.push(p);
                go(cand, len, l, i + 1, cur, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    if l == 0 {
        return out;
    }
    go(&parent.markable(), parent.len(), l, 0, &mut Vec::new(), &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_intervals(k: usize, l: usize) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        for mask in 0u32..(1 << (k - 1)) {
            let marks: Vec<usize> = (1..k).filter(|p| mask & (1 << (p - 1)) != 0).collect();
            if marks.len() == l && marks.windows(2).all(|w| w[1] - w[0] >= 2) {
                out.push(marks);
            }
        }
        out.sort();
        out
    }

    fn brute_even(k: usize, s: usize) -> Vec<Vec<u8>> {
        let len = k + 2 * s;
        let mut out: Vec<Vec<u8>> = (0u32..(1 << len))
            .map(|mask| {
                (0..len)
                    .map(|i| ((mask >> (len - 1 - i)) & 1) as u8)
                    .collect::<Vec<u8>>()
            })
            .filter(|b: &Vec<u8>| EvenSequence::new(b.clone()).is_some_and(|e| e.k() == k && e.s() == s))
            .collect();
        out.sort();
        out
    }

    #[test]
    fn intervals_small_cases() {
        let marks = |k, l| {
            enumerate_marked_intervals(k, l)
                .into_iter()
                .map(|t| t.marks)
                .collect::<Vec<_>>()
        };
        assert_eq!(marks(2, 1), vec![vec![1]]);
        assert_eq!(marks(4, 2), vec![vec![1, 3]]);
        assert_eq!(
            marks(6, 2),
            vec![vec![1, 3], vec![1, 4], vec![1, 5], vec![2, 4], vec![2, 5], vec![3, 5]]
        );
    }

    #[test]
    fn intervals_match_brute_force() {
        for k in 2..9 {
            for l in 1..=k / 2 {
                let got: Vec<Vec<usize>> = enumerate_marked_intervals(k, l).into_iter().map(|t| t.marks).collect();
                assert_eq!(got, brute_intervals(k, l), "k={k} l={l}");
            }
        }
    }

    #[test]
    fn even_sequences_small_cases() {
        let bits = |k, s| {
            enumerate_even_sequences(k, s)
                .into_iter()
                .map(|e| e.bits)
                .collect::<Vec<_>>()
        };
        assert_eq!(bits(2, 1), vec![vec![1, 0, 0, 1], vec![1, 1, 0, 0]]);
        assert_eq!(
            bits(2, 2),
            vec![vec![1, 0, 0, 0, 0, 1], vec![1, 0, 0, 1, 0, 0], vec![1, 1, 0, 0, 0, 0]]
        );
    }

    #[test]
    fn even_sequences_match_brute_force() {
        for k in 1..6 {
            for s in 1..4 {
                let got: Vec<Vec<u8>> = enumerate_even_sequences(k, s).into_iter().map(|e| e.bits).collect();
                assert_eq!(got, brute_even(k, s), "k={k} s={s}");
                assert!(got.iter().all(|b| b[0] == 1));
            }
        }
    }

    #[test]
    fn compression() {
        let c = EvenSequence::new(vec![1, 0, 0, 1]).unwrap().compress();
        assert_eq!((c.bits(), c.first_zero()), (&[1u8, 0, 1][..], 2));
        let c = EvenSequence::new(vec![1, 1, 0, 0]).unwrap().compress();
        assert_eq!((c.bits(), c.first_zero()), (&[1u8, 1, 0][..], 3));
        let c = EvenSequence::new(vec![1, 1, 1, 0, 0, 1]).unwrap().compress();
        assert_eq!(&c.bits()[..3], &[1, 1, 1]);
        assert_eq!(c.len(), 5);
    }

    #[test]
    fn compression_matches_displayed_indices_for_interior_runs() {
        // ã_1..ã_{s1-1} = 1, ã_{s1}..ã_{s2-2} = 0, ã_i = a_{i+1} for i ≥ s2−1
        for k in 2..5 {
            for s in 1..4 {
                for e in enumerate_even_sequences(k, s) {
                    let a = e.bits();
                    let s1 = a.iter().position(|&b| b == 0).unwrap() + 1;
                    let Some(s2) = (s1..a.len()).find(|&i| a[i] == 1).map(|i| i + 1) else {
                        continue;
                    };
                    let len = a.len() - 1;
                    let expected: Vec<u8> = (1..=len)
                        .map(|i| {
                            if i < s1 {
                                1
                            } else if i <= s2 - 2 {
                                0
                            } else {
                                a[i]
                            }
                        })
                        .collect();
                    assert_eq!(e.compress().bits(), &expected[..]);
                }
            }
        }
    }

    #[test]
    fn circles() {
        let c = EvenSequence::new(vec![1, 1, 0, 0, 0, 0]).unwrap().compress();
        assert_eq!(c.markable(), vec![1]);
        let c = EvenSequence::new(vec![1, 0, 0, 0, 0, 1]).unwrap().compress();
        assert_eq!(c.bits(), &[1, 0, 0, 0, 1]);
        // wrap-around pair (5, 1)
        assert_eq!(c.markable(), vec![5]);
        let c = EvenSequence::new(vec![1, 1, 1, 1, 0, 0]).unwrap().compress();
        // 1 1 1 1 0: markable 1, 2, 3; distance ≥ 2 leaves {1,3}
        let two: Vec<Vec<usize>> = enumerate_marked_circles(&c, 2).into_iter().map(|m| m.marks).collect();
        assert_eq!(two, vec![vec![1, 3]]);
    }
}

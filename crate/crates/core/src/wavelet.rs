//! Wavelet matrix over a sequence of small integers.
//!
//! Answers, for a prefix `seq[..end]`, "how many values are below `v`" and
//! "what is the k-th smallest value", each in `O(bits)` rank operations.
//! The C-P map stores score ranks in hardness order, so a prefix of the
//! sequence is a trial config and these two queries locate thresholds.

struct BitVec {
    words: Vec<u64>,
    // ones before each word
    before: Vec<u32>,
}

impl BitVec {
    fn from_bits(bits: impl ExactSizeIterator<Item = bool>) -> Self {
        let len = bits.len();
        let mut words = vec![0u64; len / 64 + 1];
        for (i, b) in bits.enumerate() {
            if b {
                words[i / 64] |= 1 << (i % 64);
            }
        }
        let mut before = Vec::with_capacity(words.len());
        let mut acc = 0u32;
        for w in &words {
            before.push(acc);
            acc += w.count_ones();
        }
        BitVec { words, before }
    }

    #[inline]
    fn rank1(&self, i: usize) -> usize {
        let (w, b) = (i / 64, i % 64);
        let mask = (1u64 << b) - 1;
        self.before[w] as usize + (self.words[w] & mask).count_ones() as usize
    }

    #[inline]
    fn rank0(&self, i: usize) -> usize {
        i - self.rank1(i)
    }
}

pub(crate) struct WaveletMatrix {
    levels: Vec<BitVec>,
    zeros: Vec<usize>,
    bits: u32,
    len: usize,
}

impl WaveletMatrix {
    /// `bits` must be large enough that every value and every query bound
    /// is below `2^bits`.
    pub fn new(values: &[u32], bits: u32) -> Self {
        let mut cur = values.to_vec();
        let mut levels = Vec::with_capacity(bits as usize);
        let mut zeros = Vec::with_capacity(bits as usize);
        for level in (0..bits).rev() {
            let bv = BitVec::from_bits(cur.iter().map(|v| (v >> level) & 1 == 1));
            let (mut lo, hi): (Vec<u32>, Vec<u32>) = cur.iter().partition(|v| (*v >> level) & 1 == 0);
            zeros.push(lo.len());
            lo.extend(hi);
            cur = lo;
            levels.push(bv);
        }
        WaveletMatrix {
            levels,
            zeros,
            bits,
            len: values.len(),
        }
    }

    /// Number of values in `seq[..end]` strictly below `value`.
    pub fn count_less(&self, end: usize, value: u32) -> usize {
        debug_assert!(end <= self.len);
        if self.bits < 32 && value >= 1 << self.bits {
            return end;
        }
        let (mut start, mut end) = (0, end);
        let mut below = 0;
        for (i, bv) in self.levels.iter().enumerate() {
            let bit = (value >> (self.bits - 1 - i as u32)) & 1;
            let (s0, e0) = (bv.rank0(start), bv.rank0(end));
            if bit == 1 {
                below += e0 - s0;
                start = self.zeros[i] + (start - s0);
                end = self.zeros[i] + (end - e0);
            } else {
                start = s0;
                end = e0;
            }
        }
        below
    }

    /// The `k`-th smallest (0-based) value in `seq[..end]`.
    pub fn kth_smallest(&self, end: usize, mut k: usize) -> u32 {
        debug_assert!(k < end && end <= self.len);
        let (mut start, mut end) = (0, end);
        let mut value = 0u32;
        for (i, bv) in self.levels.iter().enumerate() {
            let (s0, e0) = (bv.rank0(start), bv.rank0(end));
            let zeros_here = e0 - s0;
            if k < zeros_here {
                start = s0;
                end = e0;
            } else {
                k -= zeros_here;
                value |= 1 << (self.bits - 1 - i as u32);
                start = self.zeros[i] + (start - s0);
                end = self.zeros[i] + (end - e0);
            }
        }
        value
    }

    /// Smallest value in `seq[..end]` at or above `bound`.
    pub fn next_value(&self, end: usize, bound: u32) -> Option<u32> {
        let c = self.count_less(end, bound);
        (c < end).then(|| self.kth_smallest(end, c))
    }
}

/// Bits needed to represent every value in `0..=max`.
pub(crate) fn bits_for(max: u32) -> u32 {
    (32 - max.leading_zeros()).max(1)
}

//! Bit-exact arithmetic coding driven by any normalized [`Predictor`].
//!
//! Conditionals are quantized to integer frequencies out of `2^31`, with every
//! positive-probability symbol getting at least one. The coder state is a
//! 62-bit interval renormalized one bit at a time; the stream ends with the
//! shortest bit string that pins the final interval, and the decoder reads
//! missing trailing bits as zeros.

mod bits;

use crate::converters::Predictor;
use crate::error::{Error, Result};
use crate::numerics::{ExactProb, Sequence};

pub use bits::Bitstream;
use bits::{BitReader, BitWriter};

/// Quantized frequencies sum to this.
pub const FREQ_TOTAL: u64 = 1 << 31;

const STATE_BITS: u32 = 62;
const FULL: u64 = (1 << STATE_BITS) - 1;
const HALF: u64 = 1 << (STATE_BITS - 1);
const QUARTER: u64 = 1 << (STATE_BITS - 2);

/// Integer frequencies for one conditional distribution.
///
/// `f_i = max(1, floor(q_i · 2^31))` for `q_i > 0` and `0` otherwise; the
/// remainder goes to the most frequent symbol (lowest index on ties).
pub fn quantize(dist: &[ExactProb]) -> Vec<u64> {
    let mut freqs: Vec<u64> = dist
        .iter()
        .map(|q| {
            if q.is_zero() {
                0
            } else {
                let f = q.floor_scaled(FREQ_TOTAL);
                u64::try_from(f).unwrap_or(FREQ_TOTAL).clamp(1, FREQ_TOTAL)
            }
        })
        .collect();
    let sum: u64 = freqs.iter().sum();
    let top = freqs
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.cmp(b.1).then(b.0.cmp(&a.0)))
        .map(|(i, _)| i)
        .expect("non-empty distribution");
    freqs[top] = freqs[top] + FREQ_TOTAL - sum;
    freqs
}

fn normalized_distribution(p: &dyn Predictor, prefix: &Sequence) -> Result<Vec<ExactProb>> {
    let dist = p.distribution(prefix)?;
    let sum: ExactProb = dist.iter().sum();
    if !sum.is_one() || dist.iter().any(ExactProb::is_negative) {
        return Err(Error::ContractViolation {
            prefix: prefix.to_string(),
            sum: sum.to_string(),
        });
    }
    Ok(dist)
}

fn cumulative(freqs: &[u64], symbol: usize) -> (u64, u64) {
    let lo: u64 = freqs[..symbol - 1].iter().sum();
    (lo, lo + freqs[symbol - 1])
}

struct Encoder {
    low: u64,
    high: u64,
    pending: u64,
    out: BitWriter,
}

impl Encoder {
    fn new() -> Self {
        Encoder {
            low: 0,
            high: FULL,
            pending: 0,
            out: BitWriter::default(),
        }
    }

    fn emit(&mut self, bit: bool) {
        self.out.push(bit);
        for _ in 0..self.pending {
            self.out.push(!bit);
        }
        self.pending = 0;
    }

    fn encode(&mut self, lo: u64, hi: u64) {
        let range = (self.high - self.low) as u128 + 1;
        self.high = self.low + (range * hi as u128 / FREQ_TOTAL as u128) as u64 - 1;
        self.low += (range * lo as u128 / FREQ_TOTAL as u128) as u64;
        loop {
            if self.high < HALF {
                self.emit(false);
            } else if self.low >= HALF {
                self.emit(true);
                self.low -= HALF;
                self.high -= HALF;
            } else if self.low >= QUARTER && self.high < HALF + QUARTER {
                self.pending += 1;
                self.low -= QUARTER;
                self.high -= QUARTER;
            } else {
                break;
            }
            self.low <<= 1;
            self.high = (self.high << 1) | 1;
        }
    }

    /// Appends the shortest suffix whose zero-padded value lies in `[low, high]`.
    fn finish(mut self) -> BitWriter {
        let mut best: Option<Vec<bool>> = None;
        for k in 0..=STATE_BITS {
            let step = 1u64 << (STATE_BITS - k);
            let v = self.low.div_ceil(step) * step;
            if v > self.high {
                continue;
            }
            let top = |i: u32| (v >> (STATE_BITS - 1 - i)) & 1 == 1;
            let mut tail = vec![top(0)];
            tail.extend(std::iter::repeat(!top(0)).take(self.pending as usize));
            tail.extend((1..k.max(1)).map(top));
            while tail.last() == Some(&false) {
                tail.pop();
            }
            if best.as_ref().map_or(true, |b| tail.len() < b.len()) {
                best = Some(tail);
            }
        }
        for bit in best.expect("final interval is non-empty") {
            self.out.push(bit);
        }
        self.out.trim();
        self.out
    }
}

/// Encodes `x` under `p`. The header carries `d`, `n` and the predictor digest.
pub fn encode(p: &dyn Predictor, x: &Sequence) -> Result<Bitstream> {
    let d = p.alphabet_size();
    if x.alphabet_size() != d {
        return Err(Error::pre("sequence alphabet does not match predictor"));
    }
    let mut enc = Encoder::new();
    let mut prefix = Sequence::empty(d)?;
    for (t, &a) in x.symbols().iter().enumerate() {
        let dist = normalized_distribution(p, &prefix)?;
        if dist[a - 1].is_zero() {
            return Err(Error::UncodableSymbol { position: t + 1 });
        }
        let (lo, hi) = cumulative(&quantize(&dist), a);
        enc.encode(lo, hi);
        prefix.push(a)?;
    }
    let out = enc.finish();
    Ok(Bitstream::new(d, x.len() as u64, p.digest(), out))
}

struct Decoder<'a> {
    low: u64,
    high: u64,
    value: u64,
    input: BitReader<'a>,
}

impl<'a> Decoder<'a> {
    fn new(mut input: BitReader<'a>) -> Self {
        let mut value = 0;
        for _ in 0..STATE_BITS {
            value = (value << 1) | input.next_bit() as u64;
        }
        Decoder {
            low: 0,
            high: FULL,
            value,
            input,
        }
    }

    fn decode(&mut self, freqs: &[u64]) -> Result<usize> {
        let range = (self.high - self.low) as u128 + 1;
        let offset = (self.value - self.low) as u128;
        let target = (((offset + 1) * FREQ_TOTAL as u128 - 1) / range) as u64;
        let mut cum = 0;
        let mut symbol = None;
        for (i, &f) in freqs.iter().enumerate() {
            if f > 0 && target < cum + f {
                symbol = Some(i + 1);
                break;
            }
            cum += f;
        }
        let symbol = symbol.ok_or_else(|| Error::CorruptStream("value outside every symbol".into()))?;
        let (lo, hi) = cumulative(freqs, symbol);
        self.high = self.low + (range * hi as u128 / FREQ_TOTAL as u128) as u64 - 1;
        self.low += (range * lo as u128 / FREQ_TOTAL as u128) as u64;
        loop {
            if self.high < HALF {
            } else if self.low >= HALF {
                self.low -= HALF;
                self.high -= HALF;
                self.value -= HALF;
            } else if self.low >= QUARTER && self.high < HALF + QUARTER {
                self.low -= QUARTER;
                self.high -= QUARTER;
                self.value -= QUARTER;
            } else {
                break;
            }
            self.low <<= 1;
            self.high = (self.high << 1) | 1;
            self.value = (self.value << 1) | self.input.next_bit() as u64;
        }
        Ok(symbol)
    }
}

/// Inverts [`encode`]. Fails with `WrongModel` if the stream was made by a
/// different configuration and `CorruptStream` if the payload is damaged.
pub fn decode(p: &dyn Predictor, b: &Bitstream) -> Result<Sequence> {
    let d = p.alphabet_size();
    if b.alphabet_size() != d || b.digest() != p.digest() {
        return Err(Error::WrongModel);
    }
    let mut dec = Decoder::new(b.reader());
    let mut x = Sequence::empty(d)?;
    for _ in 0..b.len() {
        let dist = normalized_distribution(p, &x)?;
        let a = dec.decode(&quantize(&dist))?;
        x.push(a)?;
    }
    // A truncated or altered payload still decodes to something; re-encoding exposes it.
    let again = encode(p, &x)?;
    if again.payload() != b.payload() || again.payload_bits() != b.payload_bits() {
        return Err(Error::CorruptStream(
            "payload does not re-encode from the decoded sequence (truncated or altered)".into(),
        ));
    }
    Ok(x)
}

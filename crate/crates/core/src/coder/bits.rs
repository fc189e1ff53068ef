use crate::error::{Error, Result};

const MAGIC: &[u8; 4] = b"SQLW";
const VERSION: u8 = 1;
const HEADER_LEN: usize = 4 + 1 + 2 + 8 + 8;
const TRAILER_LEN: usize = 4;

#[derive(Default)]
pub(super) struct BitWriter {
    bits: Vec<bool>,
}

impl BitWriter {
    pub(super) fn push(&mut self, bit: bool) {
        self.bits.push(bit);
    }

    /// Drops trailing zeros; the reader supplies them back.
    pub(super) fn trim(&mut self) {
        while self.bits.last() == Some(&false) {
            self.bits.pop();
        }
    }
}

pub(super) struct BitReader<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl BitReader<'_> {
    /// Next payload bit, zero once the payload is exhausted.
    pub(super) fn next_bit(&mut self) -> bool {
        let bit = self
            .bytes
            .get(self.pos / 8)
            .is_some_and(|b| (b >> (7 - self.pos % 8)) & 1 == 1);
        self.pos += 1;
        bit
    }
}

/// A coded sequence: header (`d`, `n`, predictor digest) and an MSB-first payload.
///
/// Byte layout: `"SQLW"`, version byte, `d` as big-endian `u16`, `n` as big-endian
/// `u64`, the 8-byte digest, the payload, and finally the payload length in bits
/// as a big-endian `u32` so truncation is detectable. The payload ends at its
/// last one bit; readers treat everything after it as zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bitstream {
    d: u16,
    n: u64,
    digest: [u8; 8],
    payload: Vec<u8>,
    payload_bits: usize,
}

impl Bitstream {
    pub(super) fn new(d: usize, n: u64, digest: [u8; 8], bits: BitWriter) -> Self {
        let mut payload = vec![0u8; bits.bits.len().div_ceil(8)];
        for (i, &b) in bits.bits.iter().enumerate() {
            if b {
                payload[i / 8] |= 0x80 >> (i % 8);
            }
        }
        Bitstream {
            d: u16::try_from(d).expect("alphabet size fits in u16"),
            n,
            digest,
            payload,
            payload_bits: bits.bits.len(),
        }
    }

    pub fn alphabet_size(&self) -> usize {
        self.d as usize
    }

    /// Number of coded symbols.
    pub fn len(&self) -> u64 {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn digest(&self) -> [u8; 8] {
        self.digest
    }

    pub fn payload(&self) -> &[u8] {
        &self.payload
    }

    /// Payload length in bits, up to and including the last one bit.
    pub fn payload_bits(&self) -> usize {
        self.payload_bits
    }

    pub(super) fn reader(&self) -> BitReader<'_> {
        BitReader {
            bytes: &self.payload,
            pos: 0,
        }
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(HEADER_LEN + self.payload.len());
        out.extend_from_slice(MAGIC);
        out.push(VERSION);
        out.extend_from_slice(&self.d.to_be_bytes());
        out.extend_from_slice(&self.n.to_be_bytes());
        out.extend_from_slice(&self.digest);
        out.extend_from_slice(&self.payload);
        out.extend_from_slice(&(self.payload_bits as u32).to_be_bytes());
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        if bytes.len() < HEADER_LEN + TRAILER_LEN {
            return Err(Error::CorruptStream(format!(
                "{} bytes is shorter than header and trailer",
                bytes.len()
            )));
        }
        if &bytes[..4] != MAGIC {
            return Err(Error::CorruptStream("bad magic bytes".into()));
        }
        if bytes[4] != VERSION {
            return Err(Error::CorruptStream(format!(
                "unsupported version {}",
                bytes[4]
            )));
        }
        let d = u16::from_be_bytes([bytes[5], bytes[6]]);
        if d < 2 {
            return Err(Error::CorruptStream(format!("alphabet size {d} in header")));
        }
        let n = u64::from_be_bytes(bytes[7..15].try_into().expect("8 bytes"));
        let digest: [u8; 8] = bytes[15..23].try_into().expect("8 bytes");
        let end = bytes.len() - TRAILER_LEN;
        let payload = bytes[HEADER_LEN..end].to_vec();
        let payload_bits = u32::from_be_bytes(bytes[end..].try_into().expect("4 bytes")) as usize;
        let last_one = match payload.iter().rposition(|&b| b != 0) {
            None => 0,
            Some(i) => 8 * (i + 1) - payload[i].trailing_zeros() as usize,
        };
        if payload.len() != payload_bits.div_ceil(8) || last_one != payload_bits {
            return Err(Error::CorruptStream(format!(
                "trailer says {payload_bits} payload bits, found {} bytes ending at bit {last_one}",
                payload.len()
            )));
        }
        Ok(Bitstream {
            d,
            n,
            digest,
            payload,
            payload_bits,
        })
    }
}

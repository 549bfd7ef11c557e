//! Bit-exact graph6 interchange: McKay's ASCII encoding of the upper
//! triangle of the adjacency matrix, read column by column, 6 bits per
//! printable byte offset by 63.

use crate::graph::Graph;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum Graph6Error {
    #[error("empty graph6 input")]
    Empty,
    #[error("invalid byte {byte:#04x} at offset {offset}")]
    InvalidByte { byte: u8, offset: usize },
    #[error("truncated input: expected {expected} data bytes, found {found}")]
    Truncated { expected: usize, found: usize },
    #[error("trailing garbage after graph at offset {0}")]
    TrailingGarbage(usize),
    #[error("vertex count {0} too large for this build")]
    TooLarge(u64),
    #[error("vertex count {0} exceeds graph6 limit")]
    Unencodable(usize),
}

/// Largest vertex count the decoder will materialize.
pub const MAX_DECODE_N: u64 = 1 << 20;

const HEADER: &[u8] = b">>graph6<<";

/// Encodes a graph as a graph6 string (no header, no newline).
pub fn encode(g: &Graph) -> Result<String, Graph6Error> {
    let n = g.n();
    let mut out: Vec<u8> = Vec::new();
    push_size(&mut out, n)?;
    let nbits = n * n.saturating_sub(1) / 2;
    let mut acc: u8 = 0;
    let mut filled = 0usize;
    let mut emitted = 0usize;
    for j in 1..n {
        for i in 0..j {
            acc <<= 1;
            if g.has_edge(i, j) {
                acc |= 1;
            }
            filled += 1;
            if filled == 6 {
                out.push(acc + 63);
                acc = 0;
                filled = 0;
                emitted += 6;
            }
        }
    }
    if filled > 0 {
        acc <<= 6 - filled;
        out.push(acc + 63);
        emitted += 6;
    }
    debug_assert!(emitted >= nbits);
    Ok(String::from_utf8(out).expect("printable ascii"))
}

fn push_size(out: &mut Vec<u8>, n: usize) -> Result<(), Graph6Error> {
    if n <= 62 {
        out.push(n as u8 + 63);
    } else if n <= 258047 {
        out.push(126);
        for shift in [12u32, 6, 0] {
            out.push(((n >> shift) & 63) as u8 + 63);
        }
    } else if (n as u64) < (1u64 << 36) {
        out.push(126);
        out.push(126);
        for shift in [30u32, 24, 18, 12, 6, 0] {
            out.push(((n >> shift) & 63) as u8 + 63);
        }
    } else {
        return Err(Graph6Error::Unencodable(n));
    }
    Ok(())
}

/// Decodes one graph6 line (optionally prefixed by the standard header).
pub fn decode(text: &str) -> Result<Graph, Graph6Error> {
    let mut bytes = text.trim_end_matches(['\n', '\r']).as_bytes();
    if bytes.starts_with(HEADER) {
        bytes = &bytes[HEADER.len()..];
    }
    if bytes.is_empty() {
        return Err(Graph6Error::Empty);
    }
    let (n, mut offset) = read_size(bytes)?;
    if n > MAX_DECODE_N {
        return Err(Graph6Error::TooLarge(n));
    }
    let n = n as usize;
    let nbits = n * n.saturating_sub(1) / 2;
    let nbytes = nbits.div_ceil(6);
    if bytes.len() < offset + nbytes {
        return Err(Graph6Error::Truncated { expected: nbytes, found: bytes.len() - offset });
    }
    if bytes.len() > offset + nbytes {
        return Err(Graph6Error::TrailingGarbage(offset + nbytes));
    }
    let mut edges = Vec::new();
    let mut bit = 0usize;
    'outer: for j in 1..n {
        for i in 0..j {
            let byte = bytes[offset + bit / 6];
            if !(63..=126).contains(&byte) {
                return Err(Graph6Error::InvalidByte { byte, offset: offset + bit / 6 });
            }
            let val = byte - 63;
            if val >> (5 - bit % 6) & 1 == 1 {
                edges.push((i, j));
            }
            bit += 1;
            if bit > nbits {
                break 'outer;
            }
        }
    }
    // Validate padding bytes are in range too.
    for (k, &b) in bytes[offset..].iter().enumerate() {
        if !(63..=126).contains(&b) {
            return Err(Graph6Error::InvalidByte { byte: b, offset: offset + k });
        }
    }
    offset += nbytes;
    let _ = offset;
    Ok(Graph::from_edges(n, &edges).expect("decoded edges are in range"))
}

fn read_size(bytes: &[u8]) -> Result<(u64, usize), Graph6Error> {
    let b0 = bytes[0];
    if b0 == 126 {
        if bytes.len() >= 2 && bytes[1] == 126 {
            if bytes.len() < 8 {
                return Err(Graph6Error::Truncated { expected: 8, found: bytes.len() });
            }
            let mut n: u64 = 0;
            for (k, &b) in bytes[2..8].iter().enumerate() {
                if !(63..=126).contains(&b) {
                    return Err(Graph6Error::InvalidByte { byte: b, offset: 2 + k });
                }
                n = n << 6 | (b - 63) as u64;
            }
            Ok((n, 8))
        } else {
            if bytes.len() < 4 {
                return Err(Graph6Error::Truncated { expected: 4, found: bytes.len() });
            }
            let mut n: u64 = 0;
            for (k, &b) in bytes[1..4].iter().enumerate() {
                if !(63..=126).contains(&b) {
                    return Err(Graph6Error::InvalidByte { byte: b, offset: 1 + k });
                }
                n = n << 6 | (b - 63) as u64;
            }
            Ok((n, 4))
        }
    } else if (63..=125).contains(&b0) {
        Ok(((b0 - 63) as u64, 1))
    } else {
        Err(Graph6Error::InvalidByte { byte: b0, offset: 0 })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn single_vertex_is_at_sign() {
        let g = Graph::empty(1);
        assert_eq!(encode(&g).unwrap(), "@");
        assert_eq!(decode("@").unwrap().n(), 1);
    }

    #[test]
    fn known_encodings() {
        // K3 on 3 vertices: bits x01 x02 x12 = 111 -> 111000 = 56 -> 'w'
        let k3 = Graph::complete(3);
        assert_eq!(encode(&k3).unwrap(), "Bw");
        // P4: edges 01,12,23 -> bits (0,1)=1,(0,2)=0,(1,2)=1,(0,3)=0,(1,3)=0,(2,3)=1
        let p4 = Graph::from_edges(4, &[(0, 1), (1, 2), (2, 3)]).unwrap();
        assert_eq!(encode(&p4).unwrap(), "Ch");
    }

    #[test]
    fn d_brace_roundtrip() {
        let g = decode("D?{").unwrap();
        assert_eq!(g.n(), 5);
        assert_eq!(encode(&g).unwrap(), "D?{");
    }

    #[test]
    fn header_accepted() {
        let g = decode(">>graph6<<Bw").unwrap();
        assert_eq!(g.n(), 3);
        assert_eq!(g.m(), 3);
    }

    #[test]
    fn roundtrip_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        for _ in 0..200 {
            let n = rng.random_range(0..=20usize);
            let mut edges = Vec::new();
            for u in 0..n {
                for v in (u + 1)..n {
                    if rng.random_bool(0.4) {
                        edges.push((u, v));
                    }
                }
            }
            let g = Graph::from_edges(n, &edges).unwrap();
            let s = encode(&g).unwrap();
            let h = decode(&s).unwrap();
            assert_eq!(g, h);
            assert_eq!(encode(&h).unwrap(), s);
        }
    }

    #[test]
    fn medium_size_field() {
        // n = 100 uses the three-byte extended size field.
        let g = Graph::empty(100);
        let s = encode(&g).unwrap();
        assert!(s.starts_with('~'));
        assert_eq!(decode(&s).unwrap().n(), 100);
    }

    #[test]
    fn error_cases() {
        assert_eq!(decode("").unwrap_err(), Graph6Error::Empty);
        assert!(matches!(decode("B"), Err(Graph6Error::Truncated { .. })));
        assert!(matches!(decode("Bww"), Err(Graph6Error::TrailingGarbage(_))));
        let bad = String::from_utf8(vec![b'B', 0x20]).unwrap();
        assert!(matches!(decode(&bad), Err(Graph6Error::InvalidByte { .. })));
    }

    #[test]
    fn independent_bit_level_decoder_agrees() {
        // Cross-check the decoder against a direct bit-vector reimplementation.
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        for _ in 0..100 {
            let n = rng.random_range(1..=12usize);
            let mut edges = Vec::new();
            for u in 0..n {
                for v in (u + 1)..n {
                    if rng.random_bool(0.5) {
                        edges.push((u, v));
                    }
                }
            }
            let g = Graph::from_edges(n, &edges).unwrap();
            let s = encode(&g).unwrap();
            let bytes = s.as_bytes();
            let n2 = (bytes[0] - 63) as usize;
            assert_eq!(n2, n);
            let mut bits = Vec::new();
            for &b in &bytes[1..] {
                let v = b - 63;
                for k in (0..6).rev() {
                    bits.push(v >> k & 1 == 1);
                }
            }
            let mut idx = 0;
            for j in 1..n {
                for i in 0..j {
                    assert_eq!(bits[idx], g.has_edge(i, j), "bit ({i},{j})");
                    idx += 1;
                }
            }
            assert!(bits[idx..].iter().all(|&b| !b), "padding must be zero");
        }
    }
}

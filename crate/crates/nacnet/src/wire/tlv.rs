//! TLV primitives: type and length are unsigned big-endian varints with
//! 1/3/5-byte forms (`0xFD` introduces a u16, `0xFE` a u32; the u64 form
//! is not accepted).

use super::WireError;

/// TLV type numbers used on the wire. The table in `docs/wire.md` is the
/// normative reference for these values.
pub mod types {
    pub const INTEREST: u64 = 0x05;
    pub const DATA: u64 = 0x06;
    pub const NAME: u64 = 0x07;
    pub const NAME_COMPONENT: u64 = 0x08;
    pub const NONCE: u64 = 0x0a;
    pub const INTEREST_LIFETIME: u64 = 0x0c;
    pub const META_INFO: u64 = 0x14;
    pub const CONTENT: u64 = 0x15;
    pub const SIGNATURE_INFO: u64 = 0x16;
    pub const SIGNATURE_VALUE: u64 = 0x17;
    pub const FRESHNESS_PERIOD: u64 = 0x19;
    pub const SIGNATURE_TYPE: u64 = 0x1b;
    pub const KEY_LOCATOR: u64 = 0x1c;
    pub const CAN_BE_PREFIX: u64 = 0x21;
}

pub fn write_varint(out: &mut Vec<u8>, value: u64) {
    if value < 0xfd {
        out.push(value as u8);
    } else if value <= 0xffff {
        out.push(0xfd);
        out.extend_from_slice(&(value as u16).to_be_bytes());
    } else if value <= 0xffff_ffff {
        out.push(0xfe);
        out.extend_from_slice(&(value as u32).to_be_bytes());
    } else {
        // Nothing we encode comes close to 2^32; treat as a logic error.
        panic!("varint value {value} exceeds the supported 5-byte form");
    }
}

pub fn read_varint(buf: &[u8], pos: &mut usize) -> Result<u64, WireError> {
    let first = *buf.get(*pos).ok_or(WireError::Truncated)?;
    *pos += 1;
    match first {
        0..=0xfc => Ok(u64::from(first)),
        0xfd => {
            let bytes = buf
                .get(*pos..*pos + 2)
                .ok_or(WireError::Truncated)?;
            *pos += 2;
            Ok(u64::from(u16::from_be_bytes([bytes[0], bytes[1]])))
        }
        0xfe => {
            let bytes = buf
                .get(*pos..*pos + 4)
                .ok_or(WireError::Truncated)?;
            *pos += 4;
            Ok(u64::from(u32::from_be_bytes([
                bytes[0], bytes[1], bytes[2], bytes[3],
            ])))
        }
        0xff => Err(WireError::Malformed("8-byte varint form not supported")),
    }
}

pub fn write_tlv(out: &mut Vec<u8>, typ: u64, value: &[u8]) {
    write_varint(out, typ);
    write_varint(out, value.len() as u64);
    out.extend_from_slice(value);
}

/// Reads the next TLV, returning its type and value slice.
pub fn read_tlv<'a>(buf: &'a [u8], pos: &mut usize) -> Result<(u64, &'a [u8]), WireError> {
    let typ = read_varint(buf, pos)?;
    let len = read_varint(buf, pos)? as usize;
    let value = buf.get(*pos..*pos + len).ok_or(WireError::Truncated)?;
    *pos += len;
    Ok((typ, value))
}

/// Reads a TLV and checks its type.
pub fn expect_tlv<'a>(
    buf: &'a [u8],
    pos: &mut usize,
    typ: u64,
) -> Result<&'a [u8], WireError> {
    let (got, value) = read_tlv(buf, pos)?;
    if got != typ {
        return Err(WireError::UnexpectedTlv { expected: typ, got });
    }
    Ok(value)
}

/// Minimal-length big-endian nonnegative integer (1/2/4/8 bytes).
pub fn write_nonneg(out: &mut Vec<u8>, typ: u64, value: u64) {
    let body: Vec<u8> = if value <= 0xff {
        vec![value as u8]
    } else if value <= 0xffff {
        (value as u16).to_be_bytes().to_vec()
    } else if value <= 0xffff_ffff {
        (value as u32).to_be_bytes().to_vec()
    } else {
        value.to_be_bytes().to_vec()
    };
    write_tlv(out, typ, &body);
}

pub fn decode_nonneg(bytes: &[u8]) -> Result<u64, WireError> {
    match bytes.len() {
        1 => Ok(u64::from(bytes[0])),
        2 => Ok(u64::from(u16::from_be_bytes([bytes[0], bytes[1]]))),
        4 => Ok(u64::from(u32::from_be_bytes([
            bytes[0], bytes[1], bytes[2], bytes[3],
        ]))),
        8 => Ok(u64::from_be_bytes(bytes.try_into().unwrap())),
        _ => Err(WireError::Malformed("nonnegative integer must be 1/2/4/8 bytes")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn varint_forms() {
        for (value, len) in [(0u64, 1), (0xfc, 1), (0xfd, 3), (0xffff, 3), (0x1_0000, 5)] {
            let mut buf = Vec::new();
            write_varint(&mut buf, value);
            assert_eq!(buf.len(), len, "value {value:#x}");
            let mut pos = 0;
            assert_eq!(read_varint(&buf, &mut pos).unwrap(), value);
            assert_eq!(pos, buf.len());
        }
    }

    #[test]
    fn varint_rejects_8_byte_form() {
        let mut pos = 0;
        assert!(read_varint(&[0xff, 0, 0, 0, 0, 0, 0, 0, 1], &mut pos).is_err());
    }

    #[test]
    fn tlv_roundtrip_and_truncation() {
        let mut buf = Vec::new();
        write_tlv(&mut buf, 0x08, b"abc");
        let mut pos = 0;
        let (typ, value) = read_tlv(&buf, &mut pos).unwrap();
        assert_eq!((typ, value), (0x08, &b"abc"[..]));

        let mut pos = 0;
        assert!(read_tlv(&buf[..buf.len() - 1], &mut pos).is_err());
    }

    #[test]
    fn nonneg_minimal_lengths() {
        for (value, body_len) in [(0u64, 1), (255, 1), (256, 2), (70_000, 4), (1u64 << 40, 8)] {
            let mut buf = Vec::new();
            write_nonneg(&mut buf, 0x0c, value);
            let mut pos = 0;
            let (_, body) = read_tlv(&buf, &mut pos).unwrap();
            assert_eq!(body.len(), body_len);
            assert_eq!(decode_nonneg(body).unwrap(), value);
        }
    }
}

//! Interest and Data packets with their wire encoding.
//!
//! The byte layout is fixed by `docs/wire.md`; packet sizes reported by the
//! harness are the lengths produced by [`encode_packet`].

use super::name::Name;
use super::tlv::{self, types};
use super::WireError;

pub const DEFAULT_INTEREST_LIFETIME_MS: u64 = 4_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InterestPacket {
    pub name: Name,
    pub can_be_prefix: bool,
    /// Interest lifetime in milliseconds.
    pub lifetime_ms: u64,
    pub nonce: u32,
}

impl InterestPacket {
    pub fn new(name: Name) -> Self {
        InterestPacket {
            name,
            can_be_prefix: false,
            lifetime_ms: DEFAULT_INTEREST_LIFETIME_MS,
            nonce: 0,
        }
    }

    pub fn prefix(name: Name) -> Self {
        InterestPacket {
            can_be_prefix: true,
            ..InterestPacket::new(name)
        }
    }

    pub fn with_lifetime(mut self, lifetime_ms: u64) -> Self {
        self.lifetime_ms = lifetime_ms;
        self
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SignatureType {
    Sha256Ecdsa,
}

impl SignatureType {
    pub fn code(self) -> u64 {
        match self {
            SignatureType::Sha256Ecdsa => 3,
        }
    }

    pub fn from_code(code: u64) -> Result<Self, WireError> {
        match code {
            3 => Ok(SignatureType::Sha256Ecdsa),
            _ => Err(WireError::Malformed("unknown signature type")),
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            SignatureType::Sha256Ecdsa => "SHA256ECDSA",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DataPacket {
    pub name: Name,
    /// Freshness period in milliseconds; bounds how long caches may serve
    /// this packet.
    pub freshness_ms: u64,
    pub content: Vec<u8>,
    /// Name of the key that signed this packet.
    pub key_locator: Name,
    pub signature_type: SignatureType,
    pub signature_value: Vec<u8>,
}

impl DataPacket {
    /// The byte string covered by the signature: everything up to and
    /// including the SignatureInfo TLV.
    pub fn signed_portion(&self) -> Vec<u8> {
        let mut out = Vec::new();
        self.name.encode_into(&mut out);
        let mut meta = Vec::new();
        tlv::write_nonneg(&mut meta, types::FRESHNESS_PERIOD, self.freshness_ms);
        tlv::write_tlv(&mut out, types::META_INFO, &meta);
        tlv::write_tlv(&mut out, types::CONTENT, &self.content);
        let mut siginfo = Vec::new();
        tlv::write_nonneg(&mut siginfo, types::SIGNATURE_TYPE, self.signature_type.code());
        self.key_locator.encode_into(&mut siginfo);
        tlv::write_tlv(&mut out, types::SIGNATURE_INFO, &siginfo);
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Packet {
    Interest(InterestPacket),
    Data(DataPacket),
}

impl Packet {
    pub fn name(&self) -> &Name {
        match self {
            Packet::Interest(i) => &i.name,
            Packet::Data(d) => &d.name,
        }
    }

    pub fn is_interest(&self) -> bool {
        matches!(self, Packet::Interest(_))
    }
}

impl From<InterestPacket> for Packet {
    fn from(p: InterestPacket) -> Self {
        Packet::Interest(p)
    }
}

impl From<DataPacket> for Packet {
    fn from(p: DataPacket) -> Self {
        Packet::Data(p)
    }
}

pub fn encode_packet(packet: &Packet) -> Vec<u8> {
    match packet {
        Packet::Interest(interest) => {
            let mut body = Vec::new();
            interest.name.encode_into(&mut body);
            if interest.can_be_prefix {
                tlv::write_tlv(&mut body, types::CAN_BE_PREFIX, &[]);
            }
            tlv::write_tlv(&mut body, types::NONCE, &interest.nonce.to_be_bytes());
            tlv::write_nonneg(&mut body, types::INTEREST_LIFETIME, interest.lifetime_ms);
            let mut out = Vec::new();
            tlv::write_tlv(&mut out, types::INTEREST, &body);
            out
        }
        Packet::Data(data) => {
            let mut body = data.signed_portion();
            tlv::write_tlv(&mut body, types::SIGNATURE_VALUE, &data.signature_value);
            let mut out = Vec::new();
            tlv::write_tlv(&mut out, types::DATA, &body);
            out
        }
    }
}

pub fn decode_packet(bytes: &[u8]) -> Result<Packet, WireError> {
    let mut pos = 0;
    let (typ, body) = tlv::read_tlv(bytes, &mut pos)?;
    if pos != bytes.len() {
        return Err(WireError::Malformed("trailing bytes after packet"));
    }
    match typ {
        types::INTEREST => decode_interest(body).map(Packet::Interest),
        types::DATA => decode_data(body).map(Packet::Data),
        _ => Err(WireError::Malformed("not an Interest or Data packet")),
    }
}

fn decode_interest(body: &[u8]) -> Result<InterestPacket, WireError> {
    let mut pos = 0;
    let name = Name::decode(body, &mut pos)?;
    let (typ, value) = tlv::read_tlv(body, &mut pos)?;
    let (can_be_prefix, nonce_bytes) = if typ == types::CAN_BE_PREFIX {
        if !value.is_empty() {
            return Err(WireError::Malformed("CanBePrefix must be empty"));
        }
        (true, tlv::expect_tlv(body, &mut pos, types::NONCE)?)
    } else if typ == types::NONCE {
        (false, value)
    } else {
        return Err(WireError::Malformed("expected CanBePrefix or Nonce"));
    };
    let nonce_bytes: [u8; 4] = nonce_bytes
        .try_into()
        .map_err(|_| WireError::Malformed("nonce must be 4 bytes"))?;
    let lifetime = tlv::expect_tlv(body, &mut pos, types::INTEREST_LIFETIME)?;
    let lifetime_ms = tlv::decode_nonneg(lifetime)?;
    if pos != body.len() {
        return Err(WireError::Malformed("trailing bytes in Interest"));
    }
    Ok(InterestPacket {
        name,
        can_be_prefix,
        lifetime_ms,
        nonce: u32::from_be_bytes(nonce_bytes),
    })
}

fn decode_data(body: &[u8]) -> Result<DataPacket, WireError> {
    let mut pos = 0;
    let name = Name::decode(body, &mut pos)?;
    let meta = tlv::expect_tlv(body, &mut pos, types::META_INFO)?;
    let mut meta_pos = 0;
    let freshness = tlv::expect_tlv(meta, &mut meta_pos, types::FRESHNESS_PERIOD)?;
    if meta_pos != meta.len() {
        return Err(WireError::Malformed("trailing bytes in MetaInfo"));
    }
    let freshness_ms = tlv::decode_nonneg(freshness)?;
    let content = tlv::expect_tlv(body, &mut pos, types::CONTENT)?.to_vec();
    let siginfo = tlv::expect_tlv(body, &mut pos, types::SIGNATURE_INFO)?;
    let mut sig_pos = 0;
    let sig_type = tlv::expect_tlv(siginfo, &mut sig_pos, types::SIGNATURE_TYPE)?;
    let signature_type = SignatureType::from_code(tlv::decode_nonneg(sig_type)?)?;
    let key_locator = Name::decode(siginfo, &mut sig_pos)?;
    if sig_pos != siginfo.len() {
        return Err(WireError::Malformed("trailing bytes in SignatureInfo"));
    }
    let signature_value = tlv::expect_tlv(body, &mut pos, types::SIGNATURE_VALUE)?.to_vec();
    if pos != body.len() {
        return Err(WireError::Malformed("trailing bytes in Data"));
    }
    Ok(DataPacket {
        name,
        freshness_ms,
        content,
        key_locator,
        signature_type,
        signature_value,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn name(uri: &str) -> Name {
        Name::parse_uri(uri).unwrap()
    }

    fn sample_data() -> DataPacket {
        DataPacket {
            name: name("/a"),
            freshness_ms: 10_000,
            content: Vec::new(),
            key_locator: name("/a/KEY/k1"),
            signature_type: SignatureType::Sha256Ecdsa,
            signature_value: vec![0u8; 64],
        }
    }

    #[test]
    fn empty_data_roundtrip() {
        let packet = Packet::Data(sample_data());
        let bytes = encode_packet(&packet);
        assert_eq!(decode_packet(&bytes).unwrap(), packet);
    }

    #[test]
    fn interest_roundtrip() {
        let packet = Packet::Interest(InterestPacket {
            name: name("/military/air/aircraftA/info"),
            can_be_prefix: true,
            lifetime_ms: 4_000,
            nonce: 0xdead_beef,
        });
        let bytes = encode_packet(&packet);
        let decoded = decode_packet(&bytes).unwrap();
        assert_eq!(decoded, packet);
        assert_eq!(decoded.name(), &name("/military/air/aircraftA/info"));
    }

    #[test]
    fn empty_input_is_malformed() {
        assert!(decode_packet(&[]).is_err());
    }

    #[test]
    fn truncation_is_malformed() {
        let bytes = encode_packet(&Packet::Data(sample_data()));
        for cut in 0..bytes.len() {
            assert!(decode_packet(&bytes[..cut]).is_err(), "prefix of length {cut}");
        }
    }

    #[test]
    fn trailing_garbage_is_malformed() {
        let mut bytes = encode_packet(&Packet::Data(sample_data()));
        bytes.push(0);
        assert!(decode_packet(&bytes).is_err());
    }
}

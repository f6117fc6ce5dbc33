//! Name model, TLV wire encoding, and Data-packet signing.

pub mod name;
pub mod packet;
pub mod sign;
pub mod tlv;

pub use name::{Component, Name};
pub use packet::{
    decode_packet, encode_packet, DataPacket, InterestPacket, Packet, SignatureType,
    DEFAULT_INTEREST_LIFETIME_MS,
};
pub use sign::{sign_data, verify_data, IdentityKeyPair};

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum WireError {
    #[error("malformed packet: truncated input")]
    Truncated,
    #[error("malformed packet: {0}")]
    Malformed(&'static str),
    #[error("malformed packet: expected TLV type {expected:#x}, got {got:#x}")]
    UnexpectedTlv { expected: u64, got: u64 },
    #[error("invalid name URI: {0}")]
    InvalidUri(&'static str),
}

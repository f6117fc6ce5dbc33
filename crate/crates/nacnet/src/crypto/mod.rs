//! Cryptographic primitives and envelopes: AES-256-CBC content encryption,
//! RSA-2048-OAEP key wrapping, the attribute-policy language, and the
//! CP-ABE backends.

pub mod abe;
pub mod counter;
pub mod policy;

pub use abe::{AbeBackend, AbeMasterKey, AbePublicParams, AbeUserKey};
pub use counter::CryptoOpCounter;
pub use policy::{parse_policy, satisfies, PolicyExpr};

use aes::cipher::{block_padding::Pkcs7, BlockDecryptMut, BlockEncryptMut, KeyIvInit};
use rand::{CryptoRng, RngCore};
use rsa::{Oaep, RsaPrivateKey, RsaPublicKey};
use serde::{Deserialize, Serialize};
use sha2::Sha256;
use thiserror::Error;

use crate::naming::{KdkName, KekName};
use crate::wire::tlv;
use crate::wire::Component;

type Aes256CbcEnc = cbc::Encryptor<aes::Aes256>;
type Aes256CbcDec = cbc::Decryptor<aes::Aes256>;

/// Maximum RSA-OAEP-SHA256 payload for a 2048-bit modulus: 256 - 2*32 - 2.
pub const RSA_OAEP_CAPACITY: usize = 190;
pub const RSA_BITS: usize = 2048;
pub const AES_KEY_LEN: usize = 32;
pub const AES_BLOCK_LEN: usize = 16;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CryptoError {
    /// Wrong key, bad padding, or corrupt ciphertext; deliberately not
    /// distinguished further.
    #[error("decrypt failed")]
    DecryptFailed,
    #[error("payload of {0} bytes exceeds wrapping capacity of {RSA_OAEP_CAPACITY}")]
    PayloadTooLarge(usize),
    #[error("policy syntax error at byte {pos}: {msg}")]
    PolicySyntax { pos: usize, msg: String },
    #[error("attribute set does not satisfy the policy")]
    PolicyNotSatisfied,
    #[error("abe provider error: {0}")]
    Provider(String),
    #[error("malformed envelope: {0}")]
    MalformedEnvelope(&'static str),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum EnvelopeScheme {
    AesCbc,
    RsaOaep,
    CpAbe,
}

impl EnvelopeScheme {
    fn code(self) -> u8 {
        match self {
            EnvelopeScheme::AesCbc => 0,
            EnvelopeScheme::RsaOaep => 1,
            EnvelopeScheme::CpAbe => 2,
        }
    }

    fn from_code(code: u8) -> Result<Self, CryptoError> {
        match code {
            0 => Ok(EnvelopeScheme::AesCbc),
            1 => Ok(EnvelopeScheme::RsaOaep),
            2 => Ok(EnvelopeScheme::CpAbe),
            _ => Err(CryptoError::MalformedEnvelope("unknown scheme code")),
        }
    }
}

/// TLV types for envelope fields inside Data payloads (`docs/payloads.md`).
mod env_tlv {
    pub const SCHEME: u64 = 0x8c;
    pub const PARAMS: u64 = 0x8d;
    pub const CIPHERTEXT: u64 = 0x8e;
}

/// An encrypted payload plus the parameters needed to decrypt it
/// (IV for AES-CBC, provider header for CP-ABE, empty for RSA-OAEP).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EncryptedEnvelope {
    pub scheme: EnvelopeScheme,
    pub iv_or_params: Vec<u8>,
    pub ciphertext: Vec<u8>,
}

impl EncryptedEnvelope {
    pub fn encode(&self) -> Vec<u8> {
        let mut out = Vec::new();
        tlv::write_tlv(&mut out, env_tlv::SCHEME, &[self.scheme.code()]);
        tlv::write_tlv(&mut out, env_tlv::PARAMS, &self.iv_or_params);
        tlv::write_tlv(&mut out, env_tlv::CIPHERTEXT, &self.ciphertext);
        out
    }

    pub fn decode(bytes: &[u8]) -> Result<Self, CryptoError> {
        let malformed = |_| CryptoError::MalformedEnvelope("bad envelope TLV");
        let mut pos = 0;
        let scheme = tlv::expect_tlv(bytes, &mut pos, env_tlv::SCHEME).map_err(malformed)?;
        if scheme.len() != 1 {
            return Err(CryptoError::MalformedEnvelope("scheme must be one byte"));
        }
        let scheme = EnvelopeScheme::from_code(scheme[0])?;
        let params = tlv::expect_tlv(bytes, &mut pos, env_tlv::PARAMS).map_err(malformed)?;
        let ciphertext = tlv::expect_tlv(bytes, &mut pos, env_tlv::CIPHERTEXT).map_err(malformed)?;
        if pos != bytes.len() {
            return Err(CryptoError::MalformedEnvelope("trailing bytes"));
        }
        Ok(EncryptedEnvelope {
            scheme,
            iv_or_params: params.to_vec(),
            ciphertext: ciphertext.to_vec(),
        })
    }
}

/// Symmetric content key: what actually encrypts content bytes.
#[derive(Clone)]
pub struct ContentKey {
    pub ck_id: Component,
    pub key_bytes: [u8; AES_KEY_LEN],
}

pub fn generate_ck(rng: &mut (impl RngCore + CryptoRng)) -> ContentKey {
    let mut id = [0u8; 8];
    rng.fill_bytes(&mut id);
    let mut key_bytes = [0u8; AES_KEY_LEN];
    rng.fill_bytes(&mut key_bytes);
    ContentKey {
        ck_id: Component::from_str_value(&hex::encode(id)),
        key_bytes,
    }
}

fn aes_encrypt(key: &[u8; AES_KEY_LEN], iv: [u8; AES_BLOCK_LEN], plaintext: &[u8]) -> Vec<u8> {
    let mut buf = vec![0u8; plaintext.len() + AES_BLOCK_LEN];
    buf[..plaintext.len()].copy_from_slice(plaintext);
    let n = Aes256CbcEnc::new(key.into(), &iv.into())
        .encrypt_padded_mut::<Pkcs7>(&mut buf, plaintext.len())
        .expect("buffer sized for padding")
        .len();
    buf.truncate(n);
    buf
}

fn aes_decrypt(
    key: &[u8; AES_KEY_LEN],
    iv: &[u8],
    ciphertext: &[u8],
) -> Result<Vec<u8>, CryptoError> {
    let iv: [u8; AES_BLOCK_LEN] = iv.try_into().map_err(|_| CryptoError::DecryptFailed)?;
    if ciphertext.is_empty() || ciphertext.len() % AES_BLOCK_LEN != 0 {
        return Err(CryptoError::DecryptFailed);
    }
    let mut buf = ciphertext.to_vec();
    let plaintext = Aes256CbcDec::new(key.into(), &iv.into())
        .decrypt_padded_mut::<Pkcs7>(&mut buf)
        .map_err(|_| CryptoError::DecryptFailed)?;
    Ok(plaintext.to_vec())
}

/// AES-256-CBC with a fresh random IV and PKCS#7 padding.
pub fn encrypt_content(
    ck: &ContentKey,
    plaintext: &[u8],
    rng: &mut (impl RngCore + CryptoRng),
) -> EncryptedEnvelope {
    let mut iv = [0u8; AES_BLOCK_LEN];
    rng.fill_bytes(&mut iv);
    EncryptedEnvelope {
        scheme: EnvelopeScheme::AesCbc,
        iv_or_params: iv.to_vec(),
        ciphertext: aes_encrypt(&ck.key_bytes, iv, plaintext),
    }
}

pub fn decrypt_content(ck: &ContentKey, env: &EncryptedEnvelope) -> Result<Vec<u8>, CryptoError> {
    if env.scheme != EnvelopeScheme::AesCbc {
        return Err(CryptoError::DecryptFailed);
    }
    aes_decrypt(&ck.key_bytes, &env.iv_or_params, &env.ciphertext)
}

/// An RSA-2048 key pair with its component key-id, used for decryptor
/// encryption keys.
#[derive(Clone)]
pub struct RsaKeyPair {
    pub key_id: Component,
    pub public_key: RsaPublicKey,
    pub private_key: RsaPrivateKey,
}

pub fn generate_rsa_keypair(rng: &mut (impl RngCore + CryptoRng)) -> RsaKeyPair {
    let mut id = [0u8; 8];
    rng.fill_bytes(&mut id);
    let private_key = RsaPrivateKey::new(rng, RSA_BITS).expect("rsa keygen");
    RsaKeyPair {
        key_id: Component::from_str_value(&hex::encode(id)),
        public_key: RsaPublicKey::from(&private_key),
        private_key,
    }
}

/// A named KEK/KDK pair: RSA public half is the KEK, private half the KDK.
#[derive(Clone)]
pub struct KekKeyPair {
    pub kek_name: KekName,
    pub kdk_name: KdkName,
    pub public_key: RsaPublicKey,
    pub private_key: RsaPrivateKey,
}

pub fn generate_kek_kdk(kek_name: KekName, rng: &mut (impl RngCore + CryptoRng)) -> KekKeyPair {
    let private_key = RsaPrivateKey::new(rng, RSA_BITS).expect("rsa keygen");
    KekKeyPair {
        kdk_name: kek_name.to_kdk(),
        kek_name,
        public_key: RsaPublicKey::from(&private_key),
        private_key,
    }
}

/// RSA-OAEP-SHA256 wrap of a short payload (at most [`RSA_OAEP_CAPACITY`]
/// bytes).
pub fn wrap_key(
    public_key: &RsaPublicKey,
    payload: &[u8],
    rng: &mut (impl RngCore + CryptoRng),
) -> Result<EncryptedEnvelope, CryptoError> {
    if payload.len() > RSA_OAEP_CAPACITY {
        return Err(CryptoError::PayloadTooLarge(payload.len()));
    }
    let ciphertext = public_key
        .encrypt(rng, Oaep::new::<Sha256>(), payload)
        .map_err(|e| CryptoError::Provider(format!("rsa encrypt: {e}")))?;
    Ok(EncryptedEnvelope {
        scheme: EnvelopeScheme::RsaOaep,
        iv_or_params: Vec::new(),
        ciphertext,
    })
}

pub fn unwrap_key(
    private_key: &RsaPrivateKey,
    env: &EncryptedEnvelope,
) -> Result<Vec<u8>, CryptoError> {
    if env.scheme != EnvelopeScheme::RsaOaep {
        return Err(CryptoError::DecryptFailed);
    }
    private_key
        .decrypt(Oaep::new::<Sha256>(), &env.ciphertext)
        .map_err(|_| CryptoError::DecryptFailed)
}

/// Hybrid envelope for payloads beyond OAEP capacity (KDK private keys,
/// ABE user-key blobs): a fresh 32-byte AES key wrapped under RSA plus the
/// body under that AES key.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HybridEnvelope {
    pub wrapped_key: EncryptedEnvelope,
    pub body: EncryptedEnvelope,
}

pub fn hybrid_wrap(
    public_key: &RsaPublicKey,
    payload: &[u8],
    rng: &mut (impl RngCore + CryptoRng),
) -> Result<HybridEnvelope, CryptoError> {
    let mut key = [0u8; AES_KEY_LEN];
    rng.fill_bytes(&mut key);
    let mut iv = [0u8; AES_BLOCK_LEN];
    rng.fill_bytes(&mut iv);
    Ok(HybridEnvelope {
        wrapped_key: wrap_key(public_key, &key, rng)?,
        body: EncryptedEnvelope {
            scheme: EnvelopeScheme::AesCbc,
            iv_or_params: iv.to_vec(),
            ciphertext: aes_encrypt(&key, iv, payload),
        },
    })
}

pub fn hybrid_unwrap(
    private_key: &RsaPrivateKey,
    env: &HybridEnvelope,
) -> Result<Vec<u8>, CryptoError> {
    let key_bytes = unwrap_key(private_key, &env.wrapped_key)?;
    let key: [u8; AES_KEY_LEN] = key_bytes
        .as_slice()
        .try_into()
        .map_err(|_| CryptoError::DecryptFailed)?;
    aes_decrypt(&key, &env.body.iv_or_params, &env.body.ciphertext)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha20Rng;

    fn rng(seed: u64) -> ChaCha20Rng {
        ChaCha20Rng::seed_from_u64(seed)
    }

    #[test]
    fn ck_generation_is_fresh_and_replayable() {
        let mut r = rng(1);
        let a = generate_ck(&mut r);
        let b = generate_ck(&mut r);
        assert_ne!(a.ck_id, b.ck_id);
        assert_ne!(a.key_bytes, b.key_bytes);

        let mut r2 = rng(1);
        let a2 = generate_ck(&mut r2);
        assert_eq!(a.ck_id, a2.ck_id);
        assert_eq!(a.key_bytes, a2.key_bytes);
    }

    #[test]
    fn ck_ids_do_not_collide() {
        let mut r = rng(2);
        let mut seen = std::collections::HashSet::new();
        for _ in 0..10_000 {
            assert!(seen.insert(generate_ck(&mut r).ck_id));
        }
    }

    #[test]
    fn content_roundtrip_and_padding_size() {
        let mut r = rng(3);
        let ck = generate_ck(&mut r);
        let plaintext = vec![7u8; 128];
        let env = encrypt_content(&ck, &plaintext, &mut r);
        // 128 bytes pad to 144: a whole extra block.
        assert_eq!(env.ciphertext.len(), 144);
        assert_eq!(env.ciphertext.len() % AES_BLOCK_LEN, 0);
        assert_eq!(decrypt_content(&ck, &env).unwrap(), plaintext);
    }

    #[test]
    fn fresh_iv_every_encryption() {
        let mut r = rng(4);
        let ck = generate_ck(&mut r);
        let a = encrypt_content(&ck, b"same message", &mut r);
        let b = encrypt_content(&ck, b"same message", &mut r);
        assert_ne!(a.iv_or_params, b.iv_or_params);
        assert_ne!(a.ciphertext, b.ciphertext);
    }

    #[test]
    fn wrong_key_and_truncation_fail_uniformly() {
        let mut r = rng(5);
        let ck = generate_ck(&mut r);
        let other = generate_ck(&mut r);
        let env = encrypt_content(&ck, b"secret", &mut r);
        assert_eq!(decrypt_content(&other, &env), Err(CryptoError::DecryptFailed));

        let mut truncated = env.clone();
        truncated.ciphertext.truncate(truncated.ciphertext.len() - 1);
        assert_eq!(decrypt_content(&ck, &truncated), Err(CryptoError::DecryptFailed));
    }

    #[test]
    fn wrap_unwrap_roundtrip() {
        let mut r = rng(6);
        let pair = generate_rsa_keypair(&mut r);
        let ck = generate_ck(&mut r);
        let env = wrap_key(&pair.public_key, &ck.key_bytes, &mut r).unwrap();
        assert_eq!(unwrap_key(&pair.private_key, &env).unwrap(), ck.key_bytes);

        let other = generate_rsa_keypair(&mut r);
        assert_eq!(
            unwrap_key(&other.private_key, &env),
            Err(CryptoError::DecryptFailed)
        );

        let mut tampered = env.clone();
        tampered.ciphertext[7] ^= 1;
        assert_eq!(
            unwrap_key(&pair.private_key, &tampered),
            Err(CryptoError::DecryptFailed)
        );
    }

    #[test]
    fn oversized_payload_rejected() {
        let mut r = rng(7);
        let pair = generate_rsa_keypair(&mut r);
        let payload = vec![0u8; RSA_OAEP_CAPACITY + 1];
        assert!(matches!(
            wrap_key(&pair.public_key, &payload, &mut r),
            Err(CryptoError::PayloadTooLarge(_))
        ));
        // An RSA-2048 private key cannot ride in a plain OAEP envelope;
        // the hybrid envelope exists for exactly this payload.
        use rsa::pkcs8::EncodePrivateKey;
        let der = pair.private_key.to_pkcs8_der().unwrap();
        assert!(der.as_bytes().len() > RSA_OAEP_CAPACITY);
    }

    #[test]
    fn hybrid_roundtrip() {
        let mut r = rng(8);
        let pair = generate_rsa_keypair(&mut r);
        let payload = vec![0xabu8; 1_300];
        let env = hybrid_wrap(&pair.public_key, &payload, &mut r).unwrap();
        assert_eq!(hybrid_unwrap(&pair.private_key, &env).unwrap(), payload);

        let other = generate_rsa_keypair(&mut r);
        assert_eq!(
            hybrid_unwrap(&other.private_key, &env),
            Err(CryptoError::DecryptFailed)
        );
    }

    #[test]
    fn envelope_encoding_roundtrip() {
        let env = EncryptedEnvelope {
            scheme: EnvelopeScheme::AesCbc,
            iv_or_params: vec![1; 16],
            ciphertext: vec![2; 32],
        };
        assert_eq!(EncryptedEnvelope::decode(&env.encode()).unwrap(), env);
        assert!(EncryptedEnvelope::decode(&env.encode()[..10]).is_err());
    }
}

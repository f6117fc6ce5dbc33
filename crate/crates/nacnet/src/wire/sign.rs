//! Data-packet signing and verification (ECDSA over P-256 with SHA-256).

use p256::ecdsa::signature::{Signer, Verifier};
use p256::ecdsa::{Signature, SigningKey, VerifyingKey};
use rand::{CryptoRng, RngCore};

use super::name::{Component, Name};
use super::packet::{DataPacket, SignatureType};

/// An entity's signing identity. The key name is
/// `<identity>/KEY/<key-id>` and is what Data packets carry in their
/// KeyLocator.
#[derive(Clone)]
pub struct IdentityKeyPair {
    pub identity_name: Name,
    pub key_id: Component,
    signing: SigningKey,
    verifying: VerifyingKey,
}

impl IdentityKeyPair {
    pub fn generate(identity_name: Name, rng: &mut (impl RngCore + CryptoRng)) -> Self {
        let mut id = [0u8; 8];
        rng.fill_bytes(&mut id);
        let signing = SigningKey::random(rng);
        let verifying = VerifyingKey::from(&signing);
        IdentityKeyPair {
            identity_name,
            key_id: Component::from_str_value(&hex::encode(id)),
            signing,
            verifying,
        }
    }

    pub fn key_name(&self) -> Name {
        self.identity_name.child("KEY").child(self.key_id.clone())
    }

    pub fn public_key(&self) -> &VerifyingKey {
        &self.verifying
    }
}

/// Builds a signed Data packet. The signature covers the name, freshness,
/// content, and signature info, so any mutation of those fields invalidates
/// it.
pub fn sign_data(
    name: Name,
    content: Vec<u8>,
    freshness_ms: u64,
    signer: &IdentityKeyPair,
) -> DataPacket {
    let mut packet = DataPacket {
        name,
        freshness_ms,
        content,
        key_locator: signer.key_name(),
        signature_type: SignatureType::Sha256Ecdsa,
        signature_value: Vec::new(),
    };
    let signature: Signature = signer.signing.sign(&packet.signed_portion());
    packet.signature_value = signature.to_bytes().to_vec();
    packet
}

/// Returns true iff the packet's signature is valid under `public_key`.
/// Malformed signatures verify as false rather than erroring.
pub fn verify_data(packet: &DataPacket, public_key: &VerifyingKey) -> bool {
    let Ok(signature) = Signature::from_slice(&packet.signature_value) else {
        return false;
    };
    public_key
        .verify(&packet.signed_portion(), &signature)
        .is_ok()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha20Rng;

    fn name(uri: &str) -> Name {
        Name::parse_uri(uri).unwrap()
    }

    fn keypair(seed: u64) -> IdentityKeyPair {
        let mut rng = ChaCha20Rng::seed_from_u64(seed);
        IdentityKeyPair::generate(name("/military/control"), &mut rng)
    }

    #[test]
    fn key_name_layout() {
        let kp = keypair(1);
        let key_name = kp.key_name();
        assert!(name("/military/control/KEY").is_prefix_of(&key_name));
        assert_eq!(key_name.len(), 4);
    }

    #[test]
    fn sign_then_verify() {
        let kp = keypair(2);
        let packet = sign_data(name("/a/b"), b"payload".to_vec(), 10_000, &kp);
        assert!(verify_data(&packet, kp.public_key()));
        assert_eq!(packet.key_locator, kp.key_name());
    }

    #[test]
    fn content_flip_fails_verification() {
        let kp = keypair(3);
        let mut packet = sign_data(name("/a/b"), b"payload".to_vec(), 10_000, &kp);
        packet.content[0] ^= 0x01;
        assert!(!verify_data(&packet, kp.public_key()));
    }

    #[test]
    fn mismatched_key_fails_verification() {
        let mut rng = ChaCha20Rng::seed_from_u64(4);
        for _ in 0..20 {
            let a = IdentityKeyPair::generate(name("/x"), &mut rng);
            let b = IdentityKeyPair::generate(name("/y"), &mut rng);
            let packet = sign_data(name("/x/data"), b"m".to_vec(), 1_000, &a);
            assert!(verify_data(&packet, a.public_key()));
            assert!(!verify_data(&packet, b.public_key()));
        }
    }

    #[test]
    fn malformed_signature_is_false_not_panic() {
        let kp = keypair(5);
        let mut packet = sign_data(name("/a"), Vec::new(), 1_000, &kp);
        packet.signature_value = vec![1, 2, 3];
        assert!(!verify_data(&packet, kp.public_key()));
        packet.signature_value = Vec::new();
        assert!(!verify_data(&packet, kp.public_key()));
    }
}

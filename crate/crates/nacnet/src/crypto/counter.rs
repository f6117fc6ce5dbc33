//! Tallies of cryptographic operations, kept per entity and snapshotted
//! into scenario reports.

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CryptoOpCounter {
    pub keygen_asym: u64,
    pub rsa_encrypt: u64,
    pub rsa_decrypt: u64,
    pub aes_encrypt: u64,
    pub aes_decrypt: u64,
    pub abe_setup: u64,
    pub abe_keygen: u64,
    pub abe_encrypt: u64,
    pub abe_decrypt: u64,
    pub sign: u64,
    pub verify: u64,
}

impl CryptoOpCounter {
    pub fn add(&mut self, other: &CryptoOpCounter) {
        self.keygen_asym += other.keygen_asym;
        self.rsa_encrypt += other.rsa_encrypt;
        self.rsa_decrypt += other.rsa_decrypt;
        self.aes_encrypt += other.aes_encrypt;
        self.aes_decrypt += other.aes_decrypt;
        self.abe_setup += other.abe_setup;
        self.abe_keygen += other.abe_keygen;
        self.abe_encrypt += other.abe_encrypt;
        self.abe_decrypt += other.abe_decrypt;
        self.sign += other.sign;
        self.verify += other.verify;
    }
}

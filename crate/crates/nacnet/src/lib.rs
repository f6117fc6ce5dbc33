//! Name-based access control (NAC) over named data networking, with an
//! attribute-based variant (NAC-ABE), a deterministic simulated NDN
//! network, and a scenario harness.
//!
//! The crate is organized bottom-up:
//!
//! * [`wire`] — names, TLV packet encoding, Data signing.
//! * [`sim`] — deterministic discrete-event NDN network (FIB/PIT/content
//!   store forwarding, link outages, repos).
//! * [`naming`] — the KEK/KDK/CK/attribute naming conventions that encode
//!   access policy into names.
//! * [`crypto`] — content encryption, RSA key wrapping, the attribute
//!   policy language, and pluggable CP-ABE backends.
//! * [`nac`] — access manager, encryptor, and decryptor state machines.
//! * [`nac_abe`] — attribute authority and ABE-based produce/consume.
//! * [`harness`] — scenario configs, the runner, and report generation.

pub mod crypto;
pub mod harness;
pub mod nac;
pub mod nac_abe;
pub mod naming;
pub mod sim;
pub mod wire;

//! The NAC/NAC-ABE naming conventions.
//!
//! Every key in the system is a Data packet whose name follows one of the
//! conventions below; this module is the only place that builds or parses
//! them.
//!
//! ```text
//! KEK Data        <manager>/NAC/<granularity>/KEK/<key-id>
//! KDK Data        <manager>/NAC/<granularity>/KDK/<key-id>/ENCRYPTED-BY/<decryptor>/KEY/<decryptor key-id>
//! CK Data         <producer>/CK/<key-id>/ENCRYPTED-BY/<kek name>
//! attribute Data  <authority>/ATTRIBUTE/<attribute>/ENCRYPTED-BY/<decryptor>/KEY/<decryptor key-id>
//! notify Data     <manager>/NAC/<granularity>/NOTIFY/<epoch>
//! ```
//!
//! The marker components (`NAC`, `KEK`, ...) are reserved: they may not
//! appear inside manager, granularity, producer, or decryptor prefixes, so
//! parsing is unambiguous.

use std::fmt;

use thiserror::Error;

use crate::wire::{Component, Name};

pub const MARKER_NAC: &str = "NAC";
pub const MARKER_KEK: &str = "KEK";
pub const MARKER_KDK: &str = "KDK";
pub const MARKER_CK: &str = "CK";
pub const MARKER_ENCRYPTED_BY: &str = "ENCRYPTED-BY";
pub const MARKER_KEY: &str = "KEY";
pub const MARKER_ATTRIBUTE: &str = "ATTRIBUTE";
pub const MARKER_NOTIFY: &str = "NOTIFY";

pub const RESERVED_MARKERS: [&str; 8] = [
    MARKER_NAC,
    MARKER_KEK,
    MARKER_KDK,
    MARKER_CK,
    MARKER_ENCRYPTED_BY,
    MARKER_KEY,
    MARKER_ATTRIBUTE,
    MARKER_NOTIFY,
];

#[derive(Debug, Error, PartialEq, Eq)]
pub enum NamingError {
    #[error("{0} is not a {1} convention name")]
    NotAConventionName(Name, &'static str),
    #[error("reserved marker {marker:?} inside {what} {name}")]
    NameConventionViolation {
        name: Name,
        marker: &'static str,
        what: &'static str,
    },
    #[error("empty {0} prefix")]
    EmptyPrefix(&'static str),
}

fn is_marker(component: &Component) -> Option<&'static str> {
    RESERVED_MARKERS
        .iter()
        .find(|m| component.as_bytes() == m.as_bytes())
        .copied()
}

/// Rejects names that contain a reserved marker component.
pub fn check_marker_free(name: &Name, what: &'static str) -> Result<(), NamingError> {
    for component in name.components() {
        if let Some(marker) = is_marker(component) {
            return Err(NamingError::NameConventionViolation {
                name: name.clone(),
                marker,
                what,
            });
        }
    }
    Ok(())
}

fn position_of(name: &Name, marker: &str) -> Option<usize> {
    name.components()
        .iter()
        .position(|c| c.as_bytes() == marker.as_bytes())
}

/// The content name prefix governed by one KEK.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GranularityPrefix(Name);

impl GranularityPrefix {
    pub fn new(prefix: Name) -> Result<Self, NamingError> {
        if prefix.is_empty() {
            return Err(NamingError::EmptyPrefix("granularity"));
        }
        check_marker_free(&prefix, "granularity")?;
        Ok(GranularityPrefix(prefix))
    }

    pub fn name(&self) -> &Name {
        &self.0
    }
}

impl fmt::Display for GranularityPrefix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct KekName {
    pub manager_prefix: Name,
    pub granularity: GranularityPrefix,
    pub key_id: Component,
}

impl KekName {
    pub fn render(&self) -> Name {
        let mut name = self.manager_prefix.child(MARKER_NAC);
        name = name.join(self.granularity.name());
        name.child(MARKER_KEK).child(self.key_id.clone())
    }

    /// The matching KDK name: identical except `KEK` becomes `KDK`.
    pub fn to_kdk(&self) -> KdkName {
        KdkName {
            manager_prefix: self.manager_prefix.clone(),
            granularity: self.granularity.clone(),
            key_id: self.key_id.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct KdkName {
    pub manager_prefix: Name,
    pub granularity: GranularityPrefix,
    pub key_id: Component,
}

impl KdkName {
    pub fn render(&self) -> Name {
        let mut name = self.manager_prefix.child(MARKER_NAC);
        name = name.join(self.granularity.name());
        name.child(MARKER_KDK).child(self.key_id.clone())
    }

    pub fn to_kek(&self) -> KekName {
        KekName {
            manager_prefix: self.manager_prefix.clone(),
            granularity: self.granularity.clone(),
            key_id: self.key_id.clone(),
        }
    }
}

/// Full name of a KDK Data packet: the KDK name plus the decryptor the
/// payload is encrypted to.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct KdkDataName {
    pub kdk: KdkName,
    pub decryptor_prefix: Name,
    pub decryptor_key_id: Component,
}

impl KdkDataName {
    pub fn render(&self) -> Name {
        self.kdk
            .render()
            .child(MARKER_ENCRYPTED_BY)
            .join(&self.decryptor_prefix)
            .child(MARKER_KEY)
            .child(self.decryptor_key_id.clone())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CkName {
    pub producer_prefix: Name,
    pub ck_id: Component,
}

impl CkName {
    pub fn render(&self) -> Name {
        self.producer_prefix
            .child(MARKER_CK)
            .child(self.ck_id.clone())
    }
}

/// Full name of a CK Data packet; embeds the KEK name the CK is wrapped
/// under, which is what lets a decryptor derive the KDK to fetch.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CkDataName {
    pub ck: CkName,
    pub kek: KekName,
}

impl CkDataName {
    pub fn render(&self) -> Name {
        self.ck
            .render()
            .child(MARKER_ENCRYPTED_BY)
            .join(&self.kek.render())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AttributeInterestName {
    pub authority_prefix: Name,
    pub attribute: Component,
    pub decryptor_prefix: Name,
    pub decryptor_key_id: Component,
}

impl AttributeInterestName {
    pub fn render(&self) -> Name {
        self.authority_prefix
            .child(MARKER_ATTRIBUTE)
            .child(self.attribute.clone())
            .child(MARKER_ENCRYPTED_BY)
            .join(&self.decryptor_prefix)
            .child(MARKER_KEY)
            .child(self.decryptor_key_id.clone())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NotifyName {
    pub manager_prefix: Name,
    pub granularity: GranularityPrefix,
    pub epoch: u64,
}

impl NotifyName {
    pub fn render(&self) -> Name {
        let mut name = self.manager_prefix.child(MARKER_NAC);
        name = name.join(self.granularity.name());
        name.child(MARKER_NOTIFY)
            .child(Component::from_str_value(&self.epoch.to_string()))
    }
}

pub fn make_kek_name(
    manager: &Name,
    granularity: &GranularityPrefix,
    key_id: Component,
) -> Result<KekName, NamingError> {
    if manager.is_empty() {
        return Err(NamingError::EmptyPrefix("manager"));
    }
    check_marker_free(manager, "manager prefix")?;
    Ok(KekName {
        manager_prefix: manager.clone(),
        granularity: granularity.clone(),
        key_id,
    })
}

/// The discovery prefix `<manager>/NAC/<granularity>/KEK`: a proper prefix
/// of every KEK name for that granularity, used with `can_be_prefix` to
/// learn the live key-id.
pub fn kek_interest_name(manager: &Name, granularity: &GranularityPrefix) -> Name {
    manager
        .child(MARKER_NAC)
        .join(granularity.name())
        .child(MARKER_KEK)
}

/// Notify discovery prefix `<manager>/NAC/<granularity>/NOTIFY`.
pub fn notify_interest_name(manager: &Name, granularity: &GranularityPrefix) -> Name {
    manager
        .child(MARKER_NAC)
        .join(granularity.name())
        .child(MARKER_NOTIFY)
}

/// Flips `KEK` to `KDK` and appends `ENCRYPTED-BY/<decryptor>/KEY/<key-id>`,
/// preserving the key-id.
pub fn kek_to_kdk_data_name(
    kek: &KekName,
    decryptor_prefix: &Name,
    decryptor_key_id: Component,
) -> Result<KdkDataName, NamingError> {
    if decryptor_prefix.is_empty() {
        return Err(NamingError::EmptyPrefix("decryptor"));
    }
    check_marker_free(decryptor_prefix, "decryptor prefix")?;
    Ok(KdkDataName {
        kdk: kek.to_kdk(),
        decryptor_prefix: decryptor_prefix.clone(),
        decryptor_key_id,
    })
}

pub fn make_ck_name(producer_prefix: &Name, ck_id: Component) -> Result<CkName, NamingError> {
    if producer_prefix.is_empty() {
        return Err(NamingError::EmptyPrefix("producer"));
    }
    check_marker_free(producer_prefix, "producer prefix")?;
    Ok(CkName {
        producer_prefix: producer_prefix.clone(),
        ck_id,
    })
}

pub fn make_ck_data_name(ck: &CkName, kek: &KekName) -> CkDataName {
    CkDataName {
        ck: ck.clone(),
        kek: kek.clone(),
    }
}

pub fn make_attribute_interest_name(
    authority: &Name,
    attribute: Component,
    decryptor_prefix: &Name,
    decryptor_key_id: Component,
) -> Result<AttributeInterestName, NamingError> {
    if authority.is_empty() {
        return Err(NamingError::EmptyPrefix("authority"));
    }
    check_marker_free(authority, "authority prefix")?;
    check_marker_free(decryptor_prefix, "decryptor prefix")?;
    if is_marker(&attribute).is_some() || attribute.as_bytes().contains(&b'/') {
        return Err(NamingError::NameConventionViolation {
            name: Name::from_components(vec![attribute]),
            marker: "attribute",
            what: "attribute component",
        });
    }
    Ok(AttributeInterestName {
        authority_prefix: authority.clone(),
        attribute,
        decryptor_prefix: decryptor_prefix.clone(),
        decryptor_key_id,
    })
}

pub fn parse_kek_name(name: &Name) -> Result<KekName, NamingError> {
    let not = || NamingError::NotAConventionName(name.clone(), "KEK");
    let nac = position_of(name, MARKER_NAC).ok_or_else(not)?;
    let kek = position_of(name, MARKER_KEK).ok_or_else(not)?;
    // Layout: manager .. NAC granularity .. KEK key-id
    if nac == 0 || kek != name.len() - 2 || kek <= nac + 1 {
        return Err(not());
    }
    let manager = name.prefix(nac);
    let granularity = GranularityPrefix::new(name.prefix(kek).suffix(nac + 1)).map_err(|_| not())?;
    check_marker_free(&manager, "manager prefix").map_err(|_| not())?;
    Ok(KekName {
        manager_prefix: manager,
        granularity,
        key_id: name.get(kek + 1).cloned().ok_or_else(not)?,
    })
}

pub fn parse_kdk_data_name(name: &Name) -> Result<KdkDataName, NamingError> {
    let not = || NamingError::NotAConventionName(name.clone(), "KDK Data");
    let nac = position_of(name, MARKER_NAC).ok_or_else(not)?;
    let kdk = position_of(name, MARKER_KDK).ok_or_else(not)?;
    let enc_by = position_of(name, MARKER_ENCRYPTED_BY).ok_or_else(not)?;
    let key = position_of(name, MARKER_KEY).ok_or_else(not)?;
    // Layout: manager .. NAC granularity .. KDK key-id ENCRYPTED-BY decryptor .. KEY key-id
    if nac == 0
        || kdk <= nac + 1
        || enc_by != kdk + 2
        || key <= enc_by + 1
        || key != name.len() - 2
    {
        return Err(not());
    }
    let manager = name.prefix(nac);
    check_marker_free(&manager, "manager prefix").map_err(|_| not())?;
    let granularity = GranularityPrefix::new(name.prefix(kdk).suffix(nac + 1)).map_err(|_| not())?;
    let decryptor_prefix = name.prefix(key).suffix(enc_by + 1);
    check_marker_free(&decryptor_prefix, "decryptor prefix").map_err(|_| not())?;
    Ok(KdkDataName {
        kdk: KdkName {
            manager_prefix: manager,
            granularity,
            key_id: name.get(kdk + 1).cloned().ok_or_else(not)?,
        },
        decryptor_prefix,
        decryptor_key_id: name.get(key + 1).cloned().ok_or_else(not)?,
    })
}

/// Parses a CK Data name, extracting the embedded KEK name that drives KDK
/// retrieval.
pub fn parse_ck_data_name(name: &Name) -> Result<CkDataName, NamingError> {
    let not = || NamingError::NotAConventionName(name.clone(), "CK Data");
    let ck = position_of(name, MARKER_CK).ok_or_else(not)?;
    let enc_by = position_of(name, MARKER_ENCRYPTED_BY).ok_or_else(not)?;
    // Layout: producer .. CK key-id ENCRYPTED-BY <kek name>
    if ck == 0 || enc_by != ck + 2 {
        return Err(not());
    }
    let producer = name.prefix(ck);
    check_marker_free(&producer, "producer prefix").map_err(|_| not())?;
    let kek = parse_kek_name(&name.suffix(enc_by + 1))?;
    Ok(CkDataName {
        ck: CkName {
            producer_prefix: producer,
            ck_id: name.get(ck + 1).cloned().ok_or_else(not)?,
        },
        kek,
    })
}

pub fn parse_attribute_interest_name(name: &Name) -> Result<AttributeInterestName, NamingError> {
    let not = || NamingError::NotAConventionName(name.clone(), "attribute");
    let attr = position_of(name, MARKER_ATTRIBUTE).ok_or_else(not)?;
    let enc_by = position_of(name, MARKER_ENCRYPTED_BY).ok_or_else(not)?;
    let key = position_of(name, MARKER_KEY).ok_or_else(not)?;
    // Layout: authority .. ATTRIBUTE attr ENCRYPTED-BY decryptor .. KEY key-id
    if attr == 0 || enc_by != attr + 2 || key <= enc_by + 1 || key != name.len() - 2 {
        return Err(not());
    }
    let authority = name.prefix(attr);
    check_marker_free(&authority, "authority prefix").map_err(|_| not())?;
    let decryptor_prefix = name.prefix(key).suffix(enc_by + 1);
    check_marker_free(&decryptor_prefix, "decryptor prefix").map_err(|_| not())?;
    Ok(AttributeInterestName {
        authority_prefix: authority,
        attribute: name.get(attr + 1).cloned().ok_or_else(not)?,
        decryptor_prefix,
        decryptor_key_id: name.get(key + 1).cloned().ok_or_else(not)?,
    })
}

pub fn parse_notify_name(name: &Name) -> Result<NotifyName, NamingError> {
    let not = || NamingError::NotAConventionName(name.clone(), "notify");
    let nac = position_of(name, MARKER_NAC).ok_or_else(not)?;
    let notify = position_of(name, MARKER_NOTIFY).ok_or_else(not)?;
    if nac == 0 || notify <= nac + 1 || notify != name.len() - 2 {
        return Err(not());
    }
    let manager = name.prefix(nac);
    check_marker_free(&manager, "manager prefix").map_err(|_| not())?;
    let granularity =
        GranularityPrefix::new(name.prefix(notify).suffix(nac + 1)).map_err(|_| not())?;
    let epoch = name
        .get(notify + 1)
        .and_then(|c| c.as_utf8())
        .and_then(|s| s.parse().ok())
        .ok_or_else(not)?;
    Ok(NotifyName {
        manager_prefix: manager,
        granularity,
        epoch,
    })
}

/// What role a Data (or Interest) name plays in the scheme, judged purely
/// from its name. Used by the harness to classify traffic.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum DataClass {
    Content,
    Ck,
    Kek,
    Kdk,
    AttributeKey,
    Notify,
}

impl DataClass {
    pub fn label(self) -> &'static str {
        match self {
            DataClass::Content => "content_data",
            DataClass::Ck => "ck_data",
            DataClass::Kek => "kek_data",
            DataClass::Kdk => "kdk_data",
            DataClass::AttributeKey => "attribute_key_data",
            DataClass::Notify => "notify_data",
        }
    }
}

pub fn classify_name(name: &Name) -> DataClass {
    let has = |marker: &str| position_of(name, marker).is_some();
    if has(MARKER_KDK) {
        DataClass::Kdk
    } else if has(MARKER_KEK) && has(MARKER_CK) {
        DataClass::Ck
    } else if has(MARKER_KEK) {
        DataClass::Kek
    } else if has(MARKER_CK) {
        DataClass::Ck
    } else if has(MARKER_ATTRIBUTE) {
        DataClass::AttributeKey
    } else if has(MARKER_NOTIFY) {
        DataClass::Notify
    } else {
        DataClass::Content
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn name(uri: &str) -> Name {
        Name::parse_uri(uri).unwrap()
    }

    fn gran(uri: &str) -> GranularityPrefix {
        GranularityPrefix::new(name(uri)).unwrap()
    }

    fn comp(s: &str) -> Component {
        Component::from_str_value(s)
    }

    #[test]
    fn kek_name_rendering_matches_convention() {
        let kek = make_kek_name(&name("/military/control"), &gran("/military/air/aircraftA"), comp("kid1"))
            .unwrap();
        assert_eq!(
            kek.render().to_string(),
            "/military/control/NAC/military/air/aircraftA/KEK/kid1"
        );
        assert_eq!(parse_kek_name(&kek.render()).unwrap(), kek);

        let minimal = make_kek_name(&name("/m"), &gran("/g"), comp("k")).unwrap();
        assert_eq!(minimal.render().to_string(), "/m/NAC/g/KEK/k");
    }

    #[test]
    fn kek_interest_name_is_proper_prefix() {
        let manager = name("/military/control");
        let granularity = gran("/military/air/aircraftA");
        let interest = kek_interest_name(&manager, &granularity);
        assert_eq!(
            interest.to_string(),
            "/military/control/NAC/military/air/aircraftA/KEK"
        );
        let kek = make_kek_name(&manager, &granularity, comp("kid1")).unwrap();
        assert!(interest.is_prefix_of(&kek.render()));
        assert_ne!(interest, kek.render());
    }

    #[test]
    fn kdk_data_name_follows_fig6_chain() {
        let kek = make_kek_name(&name("/military/control"), &gran("/military/air/aircraftA"), comp("kid1"))
            .unwrap();
        let kdk_data = kek_to_kdk_data_name(
            &kek,
            &name("/military/ground/squadA/soldier1"),
            comp("kid2"),
        )
        .unwrap();
        assert_eq!(
            kdk_data.render().to_string(),
            "/military/control/NAC/military/air/aircraftA/KDK/kid1/ENCRYPTED-BY/military/ground/squadA/soldier1/KEY/kid2"
        );
        assert_eq!(parse_kdk_data_name(&kdk_data.render()).unwrap(), kdk_data);
        // Flipping back recovers the original KEK name.
        assert_eq!(kdk_data.kdk.to_kek(), kek);
        assert_eq!(kdk_data.kdk.key_id, kek.key_id);
    }

    #[test]
    fn ck_data_name_embeds_kek() {
        let kek = make_kek_name(&name("/military/control"), &gran("/military/air/aircraftA"), comp("kid1"))
            .unwrap();
        let ck = make_ck_name(&name("/military/air/aircraftA"), comp("ck1")).unwrap();
        let ck_data = make_ck_data_name(&ck, &kek);
        assert_eq!(
            ck_data.render().to_string(),
            "/military/air/aircraftA/CK/ck1/ENCRYPTED-BY/military/control/NAC/military/air/aircraftA/KEK/kid1"
        );
        let parsed = parse_ck_data_name(&ck_data.render()).unwrap();
        assert_eq!(parsed, ck_data);
        assert_eq!(parsed.kek, kek);
    }

    #[test]
    fn ck_data_name_without_marker_rejected() {
        assert!(matches!(
            parse_ck_data_name(&name("/producer/CK/ck1")),
            Err(NamingError::NotAConventionName(..))
        ));
    }

    #[test]
    fn attribute_interest_name_convention() {
        let attr = make_attribute_interest_name(
            &name("/military/control"),
            comp("SquadA-July8-2018"),
            &name("/military/ground/squadA/soldier1"),
            comp("kid2"),
        )
        .unwrap();
        assert_eq!(
            attr.render().to_string(),
            "/military/control/ATTRIBUTE/SquadA-July8-2018/ENCRYPTED-BY/military/ground/squadA/soldier1/KEY/kid2"
        );
        assert_eq!(parse_attribute_interest_name(&attr.render()).unwrap(), attr);
    }

    #[test]
    fn attribute_with_slash_rejected() {
        let result = make_attribute_interest_name(
            &name("/auth"),
            Component::new(b"a/b".to_vec()),
            &name("/dec"),
            comp("k"),
        );
        assert!(result.is_err());
    }

    #[test]
    fn reserved_markers_rejected_in_prefixes() {
        assert!(GranularityPrefix::new(name("/data/KEK/x")).is_err());
        assert!(GranularityPrefix::new(name("/data/NAC")).is_err());
        assert!(make_kek_name(&name("/m/KDK"), &gran("/g"), comp("k")).is_err());
        assert!(make_ck_name(&name("/p/ENCRYPTED-BY"), comp("c")).is_err());
    }

    #[test]
    fn nested_granularities_never_alias() {
        let manager = name("/m");
        let outer = gran("/military/air/aircraft1");
        let inner = gran("/military/air/aircraft1/north");
        let outer_interest = kek_interest_name(&manager, &outer);
        let inner_kek = make_kek_name(&manager, &inner, comp("kid")).unwrap();
        assert!(!outer_interest.is_prefix_of(&inner_kek.render()));
    }

    #[test]
    fn notify_name_roundtrip() {
        let n = NotifyName {
            manager_prefix: name("/m"),
            granularity: gran("/g/h"),
            epoch: 7,
        };
        assert_eq!(n.render().to_string(), "/m/NAC/g/h/NOTIFY/7");
        assert_eq!(parse_notify_name(&n.render()).unwrap(), n);
    }

    #[test]
    fn classification() {
        assert_eq!(classify_name(&name("/m/NAC/g/KEK/k")), DataClass::Kek);
        assert_eq!(
            classify_name(&name("/m/NAC/g/KDK/k/ENCRYPTED-BY/d/KEY/k2")),
            DataClass::Kdk
        );
        assert_eq!(
            classify_name(&name("/p/CK/c/ENCRYPTED-BY/m/NAC/g/KEK/k")),
            DataClass::Ck
        );
        assert_eq!(
            classify_name(&name("/a/ATTRIBUTE/x/ENCRYPTED-BY/d/KEY/k")),
            DataClass::AttributeKey
        );
        assert_eq!(classify_name(&name("/m/NAC/g/NOTIFY/2")), DataClass::Notify);
        assert_eq!(classify_name(&name("/military/air/aircraftA/info")), DataClass::Content);
    }
}

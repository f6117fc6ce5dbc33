//! Hierarchical names and their URI form.
//!
//! A name is an ordered list of opaque byte components. The URI form is
//! `/`-separated with percent-encoding for anything outside the unreserved
//! set (letters, digits, `-._~()`); a component consisting solely of
//! periods (including the empty component) is rendered with three extra
//! periods appended so every component survives the round trip.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::tlv::{self, types};
use super::WireError;

/// One name component: an opaque byte string. Equality is byte equality.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Component(Vec<u8>);

impl Component {
    pub fn new(value: impl Into<Vec<u8>>) -> Self {
        Component(value.into())
    }

    pub fn from_str_value(value: &str) -> Self {
        Component(value.as_bytes().to_vec())
    }

    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// The component's value as UTF-8, if it is valid UTF-8.
    pub fn as_utf8(&self) -> Option<&str> {
        std::str::from_utf8(&self.0).ok()
    }

    fn write_uri(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.iter().all(|&b| b == b'.') {
            for _ in 0..self.0.len() + 3 {
                write!(f, ".")?;
            }
            return Ok(());
        }
        for &b in &self.0 {
            if is_unreserved(b) {
                write!(f, "{}", b as char)?;
            } else {
                write!(f, "%{b:02X}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Display for Component {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_uri(f)
    }
}

impl fmt::Debug for Component {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl From<&str> for Component {
    fn from(value: &str) -> Self {
        Component::from_str_value(value)
    }
}

fn is_unreserved(b: u8) -> bool {
    b.is_ascii_alphanumeric() || matches!(b, b'-' | b'.' | b'_' | b'~' | b'(' | b')')
}

/// A hierarchical name: an ordered list of [`Component`]s.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Name {
    components: Vec<Component>,
}

impl Name {
    pub fn root() -> Self {
        Name::default()
    }

    pub fn from_components(components: Vec<Component>) -> Self {
        Name { components }
    }

    /// Parses a URI such as `/military/air/aircraftA`. Empty segments are
    /// ignored, so `/a//b` canonicalizes to `/a/b`.
    pub fn parse_uri(uri: &str) -> Result<Self, WireError> {
        let rest = uri
            .strip_prefix('/')
            .ok_or(WireError::InvalidUri("name URI must start with '/'"))?;
        let mut components = Vec::new();
        for segment in rest.split('/') {
            if segment.is_empty() {
                continue;
            }
            components.push(parse_uri_segment(segment)?);
        }
        Ok(Name { components })
    }

    pub fn components(&self) -> &[Component] {
        &self.components
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn get(&self, index: usize) -> Option<&Component> {
        self.components.get(index)
    }

    pub fn push(&mut self, component: Component) {
        self.components.push(component);
    }

    /// Returns a new name with `component` appended.
    pub fn child(&self, component: impl Into<Component>) -> Name {
        let mut name = self.clone();
        name.push(component.into());
        name
    }

    /// Returns a new name with all of `suffix`'s components appended.
    pub fn join(&self, suffix: &Name) -> Name {
        let mut name = self.clone();
        name.components.extend_from_slice(&suffix.components);
        name
    }

    pub fn is_prefix_of(&self, other: &Name) -> bool {
        self.components.len() <= other.components.len()
            && self
                .components
                .iter()
                .zip(&other.components)
                .all(|(a, b)| a == b)
    }

    pub fn prefix(&self, len: usize) -> Name {
        Name {
            components: self.components[..len.min(self.components.len())].to_vec(),
        }
    }

    /// Components from `start` (inclusive) to the end, as a new name.
    pub fn suffix(&self, start: usize) -> Name {
        Name {
            components: self.components[start.min(self.components.len())..].to_vec(),
        }
    }

    pub fn encode(&self) -> Vec<u8> {
        let mut out = Vec::new();
        self.encode_into(&mut out);
        out
    }

    pub fn encode_into(&self, out: &mut Vec<u8>) {
        let mut body = Vec::new();
        for component in &self.components {
            tlv::write_tlv(&mut body, types::NAME_COMPONENT, component.as_bytes());
        }
        tlv::write_tlv(out, types::NAME, &body);
    }

    pub fn decode(buf: &[u8], pos: &mut usize) -> Result<Self, WireError> {
        let body = tlv::expect_tlv(buf, pos, types::NAME)?;
        Name::decode_body(body)
    }

    fn decode_body(body: &[u8]) -> Result<Self, WireError> {
        let mut components = Vec::new();
        let mut pos = 0;
        while pos < body.len() {
            let value = tlv::expect_tlv(body, &mut pos, types::NAME_COMPONENT)?;
            components.push(Component::new(value));
        }
        Ok(Name { components })
    }
}

fn parse_uri_segment(segment: &str) -> Result<Component, WireError> {
    if segment.bytes().all(|b| b == b'.') {
        return match segment.len() {
            1 | 2 => Err(WireError::InvalidUri("'.' and '..' are not valid components")),
            n => Ok(Component::new(vec![b'.'; n - 3])),
        };
    }
    let bytes = segment.as_bytes();
    let mut value = Vec::with_capacity(bytes.len());
    let mut i = 0;
    while i < bytes.len() {
        match bytes[i] {
            b'%' => {
                let hex = bytes
                    .get(i + 1..i + 3)
                    .ok_or(WireError::InvalidUri("truncated percent escape"))?;
                let hi = hex_digit(hex[0])?;
                let lo = hex_digit(hex[1])?;
                value.push(hi << 4 | lo);
                i += 3;
            }
            b => {
                value.push(b);
                i += 1;
            }
        }
    }
    Ok(Component::new(value))
}

fn hex_digit(b: u8) -> Result<u8, WireError> {
    match b {
        b'0'..=b'9' => Ok(b - b'0'),
        b'a'..=b'f' => Ok(b - b'a' + 10),
        b'A'..=b'F' => Ok(b - b'A' + 10),
        _ => Err(WireError::InvalidUri("invalid hex digit in percent escape")),
    }
}

impl fmt::Display for Name {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.components.is_empty() {
            return write!(f, "/");
        }
        for component in &self.components {
            write!(f, "/")?;
            component.write_uri(f)?;
        }
        Ok(())
    }
}

impl fmt::Debug for Name {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl FromStr for Name {
    type Err = WireError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Name::parse_uri(s)
    }
}

impl TryFrom<String> for Name {
    type Error = WireError;

    fn try_from(value: String) -> Result<Self, Self::Error> {
        Name::parse_uri(&value)
    }
}

impl From<Name> for String {
    fn from(name: Name) -> String {
        name.to_string()
    }
}

//! Fresh-name generation. Renaming appends prime suffixes.

use alloc::string::String;

/// Returns `base` if `taken` rejects nothing, otherwise `base'`, `base''`, ...
pub fn fresh(base: &str, taken: impl Fn(&str) -> bool) -> String {
    let mut name = String::from(base);
    while taken(&name) {
        name.push('\'');
    }
    name
}

/// Like [`fresh`] but always moves away from `base` itself.
pub fn prime_away(base: &str, taken: impl Fn(&str) -> bool) -> String {
    let mut name = String::from(base);
    name.push('\'');
    while taken(&name) {
        name.push('\'');
    }
    name
}

//! Fuzzes the key=value config file parser: arbitrary text must parse or
//! fail cleanly, never panic.

#![no_main]

use bijac::config::parse_config_file;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let _ = parse_config_file(text);
});

//! Fuzzes the polynomial parser: arbitrary text must never panic, and
//! anything that parses must survive a print/parse round trip.

#![no_main]

use bijac::bipoly::BiDegree;
use bijac::field::{PrimeField, Rationals, DEFAULT_PRIME};
use bijac::parse_bipoly;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let degrees = [
        BiDegree::new(0, 0),
        BiDegree::new(1, 1),
        BiDegree::new(3, 3),
        BiDegree::new(2, 5),
    ];
    let fp = PrimeField::new(DEFAULT_PRIME).unwrap();
    for deg in degrees {
        if let Ok(p) = parse_bipoly(Rationals, text, deg) {
            let printed = p.to_string();
            let back = parse_bipoly(Rationals, &printed, deg).expect("printer output re-parses");
            assert_eq!(back, p, "round trip through the printer");
        }
        if let Ok(p) = parse_bipoly(fp, text, deg) {
            let printed = p.to_string();
            let back = parse_bipoly(fp, &printed, deg).expect("printer output re-parses");
            assert_eq!(back, p, "round trip through the printer");
        }
    }
});

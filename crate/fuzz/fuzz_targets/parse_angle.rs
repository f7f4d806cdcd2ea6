#![no_main]

use libfuzzer_sys::fuzz_target;
use parrondo_qw::config::parse_angle;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(x) = parse_angle(text) {
        assert!(x.is_finite(), "{text:?} parsed to {x}");
    }
});

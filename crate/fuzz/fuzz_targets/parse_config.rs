#![no_main]

use libfuzzer_sys::fuzz_target;
use parrondo_qw::config::RunConfig;

fuzz_target!(|data: &[u8]| {
    let text = String::from_utf8_lossy(data);
    let Ok(cfg) = RunConfig::from_toml_str(&text) else {
        return;
    };
    // accepted configs are fully usable and survive a round trip
    cfg.lattice().unwrap();
    cfg.coin1().unwrap();
    cfg.coin2().unwrap();
    cfg.marked_set().unwrap();
    cfg.sweep_spec().unwrap().validate().unwrap();
    let back = RunConfig::from_toml_str(&cfg.to_toml_string()).unwrap();
    assert_eq!(back, cfg);
});

//! End-to-end tests of the `rc4sim` binary, including the file
//! round-trip acceptance criterion. Run with `-- --nocapture` to see the
//! PASS lines.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use rand::{rngs::StdRng, Rng, SeedableRng};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_rc4sim"))
}

fn run_ok(args: &[&str]) -> Output {
    let out = bin().args(args).output().expect("spawn rc4sim");
    assert!(
        out.status.success(),
        "rc4sim {args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    out
}

fn write_random(path: &Path, rng: &mut StdRng, len: usize) -> Vec<u8> {
    let data: Vec<u8> = (0..len).map(|_| rng.gen()).collect();
    std::fs::write(path, &data).unwrap();
    data
}

fn crypt(dir: &Path, verb: &str, design: u8, key_hex: &str, input: &Path, name: &str) -> PathBuf {
    let out = dir.join(name);
    run_ok(&[
        verb,
        "--design",
        &design.to_string(),
        "--key-hex",
        key_hex,
        "--in",
        input.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ]);
    out
}

/// Round-trip identity for random files under every design, including
/// one 16 MiB file.
#[test]
fn encrypt_decrypt_round_trip_every_design() {
    let mut rng = StdRng::seed_from_u64(0xc11_0001);
    let dir = tempfile::tempdir().unwrap();
    for design in 1..=6u8 {
        let len = if design == 1 { 16 << 20 } else { rng.gen_range(1..=2 << 20) };
        let key_hex = hex::encode((0..rng.gen_range(4..=32)).map(|_| rng.gen::<u8>()).collect::<Vec<u8>>());
        let plain_path = dir.path().join(format!("plain{design}"));
        let plain = write_random(&plain_path, &mut rng, len);
        let ct = crypt(dir.path(), "encrypt", design, &key_hex, &plain_path, &format!("ct{design}"));
        let rt = crypt(dir.path(), "decrypt", design, &key_hex, &ct, &format!("rt{design}"));
        assert_ne!(std::fs::read(&ct).unwrap(), plain, "design {design}: ciphertext differs");
        assert_eq!(std::fs::read(&rt).unwrap(), plain, "design {design}: round trip");
        println!("PASS: CLI round trip design {design} ({len} bytes)");
    }
}

#[test]
fn published_vector_ciphertext() {
    let dir = tempfile::tempdir().unwrap();
    let pt = dir.path().join("pt");
    std::fs::write(&pt, b"Plaintext").unwrap();
    let ct = crypt(dir.path(), "encrypt", 1, &hex::encode(b"Key"), &pt, "ct");
    assert_eq!(hex::encode(std::fs::read(ct).unwrap()), "bbf316e8d940af0ad3");
    println!("PASS: CLI published vector ciphertext");
}

#[test]
fn designs_one_through_four_agree() {
    let mut rng = StdRng::seed_from_u64(0xc11_0002);
    let dir = tempfile::tempdir().unwrap();
    let pt = dir.path().join("pt");
    write_random(&pt, &mut rng, 70_001);
    let key_hex = hex::encode(b"agreement-key");
    let first = std::fs::read(crypt(dir.path(), "encrypt", 1, &key_hex, &pt, "ct1")).unwrap();
    for design in 2..=4u8 {
        let ct = crypt(dir.path(), "encrypt", design, &key_hex, &pt, &format!("ct{design}"));
        assert_eq!(std::fs::read(ct).unwrap(), first, "design {design}");
    }
    println!("PASS: CLI designs 1-4 identical ciphertext");
}

#[test]
fn keystream_n_zero_writes_empty_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("empty");
    run_ok(&["keystream", "--design", "1", "--key", "k", "--n", "0", "--out", out.to_str().unwrap()]);
    assert_eq!(std::fs::read(out).unwrap(), b"");
}

#[test]
fn short_key_for_design_five_is_usage_error() {
    let out = bin()
        .args(["keystream", "--design", "5", "--key-hex", "6162", "--n", "8"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("lanes"));
}

#[test]
fn missing_key_flag_is_usage_error() {
    let out = bin().args(["keystream", "--design", "1", "--n", "4"]).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn report_json_is_schema_stable() {
    let out = run_ok(&["report", "--n", "256", "--format", "json"]);
    let rows: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let rows = rows.as_array().unwrap();
    assert_eq!(rows.len(), 6);
    let d1 = &rows[0];
    for field in [
        "design",
        "n",
        "ksa_clocks",
        "prga_clocks",
        "total_clocks",
        "per_byte_formula",
        "per_byte_measured",
    ] {
        assert!(d1.get(field).is_some(), "missing {field}");
    }
    assert_eq!(d1["total_clocks"], 515);
    assert_eq!(rows[2]["total_clocks"], 259);
    assert_eq!(d1["per_byte_formula"], d1["per_byte_measured"]);
    println!("PASS: CLI report JSON schema");
}

#[test]
fn verify_tables_sampled_passes() {
    let out = run_ok(&["verify-tables", "--sample", "200000"]);
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("case 8: 0"));
    assert!(text.trim_end().ends_with("PASS"));
}

#[test]
fn serve_and_send_round_trip() {
    let mut rng = StdRng::seed_from_u64(0xc11_0003);
    let dir = tempfile::tempdir().unwrap();
    let pt = dir.path().join("pt");
    write_random(&pt, &mut rng, 300_000);
    // pick a free port by binding and releasing it
    let port = std::net::TcpListener::bind("127.0.0.1:0").unwrap().local_addr().unwrap().port();
    let mut server = bin()
        .args(["serve", "--design", "4", "--key", "net-key", "--host", "127.0.0.1", "--port", &port.to_string()])
        .spawn()
        .unwrap();
    // wait for the listener to come up
    let deadline = std::time::Instant::now() + std::time::Duration::from_secs(10);
    loop {
        if std::net::TcpStream::connect(("127.0.0.1", port)).is_ok() {
            break;
        }
        assert!(std::time::Instant::now() < deadline, "server never listened");
        std::thread::sleep(std::time::Duration::from_millis(50));
    }
    let out = bin()
        .args(["send", "--design", "4", "--key", "net-key", "--host", "127.0.0.1", "--port", &port.to_string(), "--in", pt.to_str().unwrap()])
        .output()
        .unwrap();
    server.kill().unwrap();
    server.wait().unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(String::from_utf8_lossy(&out.stderr).contains("sent 300000 bytes"));
    println!("PASS: CLI serve/send loopback");
}

//! Two-endpoint framed TCP demo: one endpoint encrypts outbound frames,
//! the peer decrypts and echoes a checksum acknowledgment.
//!
//! Wire format, big-endian throughout:
//!
//! ```text
//! magic   4 octets, ASCII "RC4S"
//! design  1 octet
//! seq     4 octets
//! length  4 octets, payload byte count
//! payload `length` octets
//! ```
//!
//! Data frames carry ciphertext; each acknowledgment mirrors the frame's
//! seq and carries a 4-octet checksum of the recovered plaintext. The
//! checksum is a plain 32-bit wrapping byte sum — an integrity hint for
//! the demo, not a MAC. Acks carry no ciphertext, so each connection
//! direction consumes keystream for payload bytes only and the stream is
//! never reused.

use std::io::{self, Read, Write};
use std::net::{TcpListener, TcpStream, ToSocketAddrs};

use crate::hwsim::DesignId;
use crate::rc4::SecretKey;
use crate::stream::KeystreamGen;

pub const MAGIC: [u8; 4] = *b"RC4S";

/// Payload bytes per data frame used by [`send`].
pub const DEFAULT_FRAME_PAYLOAD: usize = 64 * 1024;

/// Refuse absurd length fields before allocating.
const MAX_PAYLOAD: u32 = 1 << 24;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Frame {
    pub design: DesignId,
    pub seq: u32,
    pub payload: Vec<u8>,
}

impl Frame {
    pub fn write_to<W: Write>(&self, w: &mut W) -> io::Result<()> {
        w.write_all(&MAGIC)?;
        w.write_all(&[self.design.number()])?;
        w.write_all(&self.seq.to_be_bytes())?;
        w.write_all(&(self.payload.len() as u32).to_be_bytes())?;
        w.write_all(&self.payload)?;
        w.flush()
    }

    /// Reads one frame. Returns `Ok(None)` on a clean EOF at a frame
    /// boundary.
    pub fn read_from<R: Read>(r: &mut R) -> io::Result<Option<Frame>> {
        let mut magic = [0u8; 4];
        match r.read(&mut magic)? {
            0 => return Ok(None),
            n => r.read_exact(&mut magic[n..])?,
        }
        if magic != MAGIC {
            return Err(invalid("bad frame magic"));
        }
        let mut head = [0u8; 9];
        r.read_exact(&mut head)?;
        let design = DesignId::from_number(head[0]).map_err(|e| invalid(&e.to_string()))?;
        let seq = u32::from_be_bytes(head[1..5].try_into().unwrap());
        let length = u32::from_be_bytes(head[5..9].try_into().unwrap());
        if length > MAX_PAYLOAD {
            return Err(invalid("frame payload too large"));
        }
        let mut payload = vec![0u8; length as usize];
        r.read_exact(&mut payload)?;
        Ok(Some(Frame {
            design,
            seq,
            payload,
        }))
    }
}

fn invalid(msg: &str) -> io::Error {
    io::Error::new(io::ErrorKind::InvalidData, msg.to_string())
}

/// 32-bit wrapping byte sum of the plaintext.
pub fn checksum(data: &[u8]) -> u32 {
    data.iter().fold(0u32, |acc, &b| acc.wrapping_add(b as u32))
}

#[derive(Debug, Default, Clone, Copy, PartialEq, Eq)]
pub struct TransferSummary {
    pub frames: u64,
    pub bytes: u64,
}

/// Handles one inbound connection until the peer closes it: decrypts
/// each data frame with the connection's continuous keystream and
/// replies with a checksum acknowledgment. Bad magic, a design mismatch
/// or a seq gap abort the connection with `InvalidData`.
pub fn handle_connection(
    mut stream: TcpStream,
    key: &SecretKey,
    design: DesignId,
) -> io::Result<TransferSummary> {
    let mut gen = KeystreamGen::new(design, key).map_err(|e| invalid(&e.to_string()))?;
    let mut summary = TransferSummary::default();
    let mut expected_seq = 0u32;
    loop {
        let Some(mut frame) = Frame::read_from(&mut stream)? else {
            return Ok(summary);
        };
        if frame.design != design {
            return Err(invalid("design mismatch"));
        }
        if frame.seq != expected_seq {
            return Err(invalid("sequence gap"));
        }
        expected_seq = expected_seq.wrapping_add(1);
        gen.apply(&mut frame.payload); // ciphertext -> plaintext
        let ack = Frame {
            design,
            seq: frame.seq,
            payload: checksum(&frame.payload).to_be_bytes().to_vec(),
        };
        ack.write_to(&mut stream)?;
        summary.frames += 1;
        summary.bytes += frame.payload.len() as u64;
    }
}

/// Accept loop: one thread per connection, each with fully isolated
/// engine state. Runs until the listener fails.
pub fn serve(addr: impl ToSocketAddrs, key: &SecretKey, design: DesignId) -> io::Result<()> {
    let listener = TcpListener::bind(addr)?;
    loop {
        let (stream, peer) = listener.accept()?;
        let key = key.clone();
        std::thread::spawn(move || {
            if let Err(err) = handle_connection(stream, &key, design) {
                eprintln!("connection {peer}: reset: {err}");
            }
        });
    }
}

/// Client side of one connection. The keystream position persists across
/// frames and across multiple `send_stream` calls on the same sender.
pub struct Sender {
    stream: TcpStream,
    gen: KeystreamGen,
    design: DesignId,
    next_seq: u32,
    frame_payload: usize,
}

impl Sender {
    pub fn connect(
        addr: impl ToSocketAddrs,
        key: &SecretKey,
        design: DesignId,
    ) -> io::Result<Self> {
        Ok(Sender {
            stream: TcpStream::connect(addr)?,
            gen: KeystreamGen::new(design, key).map_err(|e| invalid(&e.to_string()))?,
            design,
            next_seq: 0,
            frame_payload: DEFAULT_FRAME_PAYLOAD,
        })
    }

    pub fn set_frame_payload(&mut self, bytes: usize) {
        assert!(bytes > 0);
        self.frame_payload = bytes;
    }

    /// Encrypts and sends everything from `input`, verifying every ack
    /// checksum against the local plaintext.
    pub fn send_stream<R: Read>(&mut self, input: &mut R) -> io::Result<TransferSummary> {
        let mut summary = TransferSummary::default();
        let mut buf = vec![0u8; self.frame_payload];
        loop {
            let n = read_up_to(input, &mut buf)?;
            if n == 0 {
                return Ok(summary);
            }
            let plain_sum = checksum(&buf[..n]);
            let mut payload = buf[..n].to_vec();
            self.gen.apply(&mut payload); // plaintext -> ciphertext
            let frame = Frame {
                design: self.design,
                seq: self.next_seq,
                payload,
            };
            frame.write_to(&mut self.stream)?;
            let ack = Frame::read_from(&mut self.stream)?
                .ok_or_else(|| invalid("connection closed before ack"))?;
            if ack.seq != self.next_seq || ack.payload != plain_sum.to_be_bytes() {
                return Err(invalid("ack checksum mismatch"));
            }
            self.next_seq = self.next_seq.wrapping_add(1);
            summary.frames += 1;
            summary.bytes += n as u64;
        }
    }
}

fn read_up_to<R: Read>(r: &mut R, buf: &mut [u8]) -> io::Result<usize> {
    let mut filled = 0;
    while filled < buf.len() {
        match r.read(&mut buf[filled..])? {
            0 => break,
            n => filled += n,
        }
    }
    Ok(filled)
}

/// One-shot transfer: connect, stream `input`, close.
pub fn send<R: Read>(
    addr: impl ToSocketAddrs,
    key: &SecretKey,
    design: DesignId,
    input: &mut R,
) -> io::Result<TransferSummary> {
    let mut sender = Sender::connect(addr, key, design)?;
    sender.send_stream(input)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Cursor;
    use std::net::TcpListener;

    fn key() -> SecretKey {
        SecretKey::new(b"netlink-demo-key".to_vec()).unwrap()
    }

    fn spawn_server(
        design: DesignId,
    ) -> (std::net::SocketAddr, std::thread::JoinHandle<io::Result<TransferSummary>>) {
        let listener = TcpListener::bind("127.0.0.1:0").unwrap();
        let addr = listener.local_addr().unwrap();
        let handle = std::thread::spawn(move || {
            let (stream, _) = listener.accept()?;
            handle_connection(stream, &key(), design)
        });
        (addr, handle)
    }

    #[test]
    fn frame_round_trip() {
        let frame = Frame {
            design: DesignId::D3,
            seq: 42,
            payload: vec![1, 2, 3, 4, 5],
        };
        let mut wire = Vec::new();
        frame.write_to(&mut wire).unwrap();
        assert_eq!(&wire[..4], b"RC4S");
        let decoded = Frame::read_from(&mut Cursor::new(wire)).unwrap().unwrap();
        assert_eq!(decoded, frame);
    }

    #[test]
    fn empty_input_sends_no_frames() {
        let (addr, server) = spawn_server(DesignId::D1);
        let summary = send(addr, &key(), DesignId::D1, &mut Cursor::new(vec![])).unwrap();
        assert_eq!(summary, TransferSummary::default());
        assert_eq!(server.join().unwrap().unwrap(), TransferSummary::default());
    }

    #[test]
    fn loopback_hello() {
        let (addr, server) = spawn_server(DesignId::D2);
        let summary = send(addr, &key(), DesignId::D2, &mut Cursor::new(b"hello".to_vec())).unwrap();
        assert_eq!(summary.bytes, 5);
        let server_summary = server.join().unwrap().unwrap();
        assert_eq!(server_summary.bytes, 5);
    }

    #[test]
    fn design_mismatch_resets_on_first_frame() {
        let (addr, server) = spawn_server(DesignId::D1);
        let result = send(addr, &key(), DesignId::D3, &mut Cursor::new(b"x".to_vec()));
        assert!(result.is_err());
        let server_result = server.join().unwrap();
        assert!(server_result.is_err());
    }

    #[test]
    fn keystream_continues_across_sends_on_one_connection() {
        let listener = TcpListener::bind("127.0.0.1:0").unwrap();
        let addr = listener.local_addr().unwrap();
        let server = std::thread::spawn(move || {
            let (stream, _) = listener.accept()?;
            handle_connection(stream, &key(), DesignId::D4)
        });
        let mut sender = Sender::connect(addr, &key(), DesignId::D4).unwrap();
        sender.set_frame_payload(7); // odd size forces pair-carry handling
        sender.send_stream(&mut Cursor::new(b"first message".to_vec())).unwrap();
        sender.send_stream(&mut Cursor::new(b"second message".to_vec())).unwrap();
        drop(sender);
        let summary = server.join().unwrap().unwrap();
        assert_eq!(summary.bytes, 13 + 14);
        assert_eq!(summary.frames, 2 + 2);
    }

    #[test]
    fn multi_frame_transfer_random_sizes() {
        use rand::{rngs::StdRng, Rng, SeedableRng};
        let mut rng = StdRng::seed_from_u64(99);
        for design in [DesignId::D1, DesignId::D5] {
            let size = rng.gen_range(0..100_000);
            let data: Vec<u8> = (0..size).map(|_| rng.gen()).collect();
            let (addr, server) = spawn_server(design);
            let mut sender = Sender::connect(addr, &key(), design).unwrap();
            sender.set_frame_payload(4096);
            let summary = sender.send_stream(&mut Cursor::new(data.clone())).unwrap();
            assert_eq!(summary.bytes, size as u64);
            drop(sender);
            assert_eq!(server.join().unwrap().unwrap().bytes, size as u64);
        }
    }
}

//! Protocol v1 for out-of-process targets.
//!
//! A child process announces itself with `GRAPHFUZZ-ADAPTER 1 <problems>`
//! and then answers one framed request at a time. Every message is framed as
//! its decimal byte length, a newline, and the body. Requests carry the
//! graph in the canonical text format; responses carry a one-line payload
//! that decodes back into a [`TargetOutput`].

use std::collections::BTreeMap;
use std::io::{self, BufRead, BufReader, Write};
use std::process::{Child, ChildStdin, Command, Stdio};
use std::sync::mpsc::{self, Receiver, RecvTimeoutError};
use std::thread;
use std::time::Duration;

use thiserror::Error;

use crate::graph::{parse, serialize, EndpointPair, Graph, VertexId};
use crate::targets::{canonical_sets, execute_fn, ExecOutcome, ImplId, MstOut, PairScore, ProblemId, SpfOut, TargetInput, TargetOutput};

pub const PROTOCOL_VERSION: u32 = 1;
pub const HANDSHAKE_PREFIX: &str = "GRAPHFUZZ-ADAPTER";

/// How long a freshly spawned child may take to print its handshake.
pub const HANDSHAKE_TIMEOUT: Duration = Duration::from_secs(10);

/// Upper bound on a single frame; anything larger is treated as garbage.
const MAX_FRAME: usize = 64 << 20;

#[derive(Debug, Error)]
pub enum ProtocolError {
    #[error("malformed frame: {0}")]
    Frame(String),
    #[error("malformed request: {0}")]
    Request(String),
    #[error("malformed response: {0}")]
    Response(String),
    #[error("malformed {problem} payload `{payload}`")]
    Payload { problem: ProblemId, payload: String },
}

#[derive(Debug, Error)]
pub enum AdapterError {
    #[error("could not start adapter: {0}")]
    Spawn(#[source] io::Error),
    #[error("adapter handshake failed: {0}")]
    Handshake(String),
    #[error("adapter speaks protocol version {found}, expected {PROTOCOL_VERSION}")]
    ProtocolVersionMismatch { found: String },
    #[error("adapter does not support {0}")]
    UnsupportedProblem(ProblemId),
}

// ---------------------------------------------------------------------------
// Framing
// ---------------------------------------------------------------------------

pub fn write_frame<W: Write>(w: &mut W, body: &str) -> io::Result<()> {
    write!(w, "{}\n{}", body.len(), body)?;
    w.flush()
}

/// Reads one frame. `Ok(None)` on end of stream before a length line.
pub fn read_frame<R: BufRead>(r: &mut R) -> Result<Option<String>, ProtocolError> {
    let mut line = String::new();
    let n = r
        .read_line(&mut line)
        .map_err(|e| ProtocolError::Frame(e.to_string()))?;
    if n == 0 {
        return Ok(None);
    }
    let len: usize = line
        .trim_end_matches('\n')
        .parse()
        .map_err(|_| ProtocolError::Frame(format!("bad length line {line:?}")))?;
    if len > MAX_FRAME {
        return Err(ProtocolError::Frame(format!("frame of {len} bytes")));
    }
    let mut body = vec![0; len];
    r.read_exact(&mut body)
        .map_err(|e| ProtocolError::Frame(format!("truncated body: {e}")))?;
    String::from_utf8(body)
        .map(Some)
        .map_err(|e| ProtocolError::Frame(format!("body is not UTF-8: {e}")))
}

// ---------------------------------------------------------------------------
// Messages
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdapterRequest {
    pub id: u64,
    pub problem: ProblemId,
    pub endpoints: EndpointPair,
    pub graph: Graph,
}

impl AdapterRequest {
    pub fn encode(&self) -> String {
        format!(
            "REQ {} {} {} {}\n{}",
            self.id,
            self.problem,
            self.endpoints.s,
            self.endpoints.t,
            serialize(&self.graph)
        )
    }

    pub fn decode(body: &str) -> Result<Self, ProtocolError> {
        let bad = |m: &str| ProtocolError::Request(m.to_string());
        let (head, graph_text) = body.split_once('\n').ok_or_else(|| bad("missing header line"))?;
        let f: Vec<&str> = head.split(' ').collect();
        if f.len() != 5 || f[0] != "REQ" {
            return Err(bad(&format!("header {head:?}")));
        }
        let id = f[1].parse().map_err(|_| bad("request id"))?;
        let problem = f[2].parse().map_err(|e: String| bad(&e))?;
        let s = f[3].parse().map_err(|_| bad("source vertex"))?;
        let t = f[4].parse().map_err(|_| bad("target vertex"))?;
        let graph = parse(graph_text).map_err(|e| bad(&e.to_string()))?;
        Ok(Self {
            id,
            problem,
            endpoints: EndpointPair { s, t },
            graph,
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum ResponseStatus {
    Ok(TargetOutput),
    Crash(String),
}

#[derive(Clone, Debug, PartialEq)]
pub struct AdapterResponse {
    pub id: u64,
    pub status: ResponseStatus,
}

impl AdapterResponse {
    pub fn encode(&self) -> String {
        match &self.status {
            ResponseStatus::Ok(out) => format!("RESP {} ok {}\n", self.id, encode_output(out)),
            ResponseStatus::Crash(msg) => format!("RESP {} crash {}\n", self.id, one_line(msg)),
        }
    }

    /// The payload grammar depends on the problem, which the caller knows
    /// from its own request.
    pub fn decode(body: &str, problem: ProblemId) -> Result<Self, ProtocolError> {
        let bad = |m: String| ProtocolError::Response(m);
        let line = body
            .strip_suffix('\n')
            .ok_or_else(|| bad(format!("missing newline in {body:?}")))?;
        let mut parts = line.splitn(4, ' ');
        if parts.next() != Some("RESP") {
            return Err(bad(format!("{line:?}")));
        }
        let id = parts
            .next()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| bad(format!("bad id in {line:?}")))?;
        let status = parts.next();
        let payload = parts.next().unwrap_or("");
        let status = match status {
            Some("ok") => ResponseStatus::Ok(decode_output(problem, payload)?),
            Some("crash") => ResponseStatus::Crash(payload.to_string()),
            _ => return Err(bad(format!("bad status in {line:?}"))),
        };
        Ok(Self { id, status })
    }
}

fn one_line(s: &str) -> String {
    s.replace(['\n', '\r'], " ")
}

// ---------------------------------------------------------------------------
// Output payloads
// ---------------------------------------------------------------------------

fn encode_sets(sets: &[Vec<VertexId>]) -> String {
    canonical_sets(sets)
        .iter()
        .map(|s| {
            let inner: Vec<String> = s.iter().map(u32::to_string).collect();
            format!("{{{}}}", inner.join(","))
        })
        .collect::<Vec<_>>()
        .join(" ")
}

fn encode_pair_scores(scores: &[PairScore]) -> String {
    let body: Vec<String> = scores.iter().map(|p| format!("{},{}:{}", p.u, p.v, p.score)).collect();
    format!("pairs {}; {}", scores.len(), body.join(" "))
}

/// One-line text form of an output. Floats use the shortest representation
/// that parses back to the same value.
pub fn encode_output(out: &TargetOutput) -> String {
    match out {
        TargetOutput::Spf(SpfOut::Length(l)) => format!("length {l}"),
        TargetOutput::Spf(SpfOut::Unreachable) => "unreachable".into(),
        TargetOutput::Spf(SpfOut::NegativeCycle) => "negative_cycle".into(),
        TargetOutput::Mst(m) => {
            let edges: Vec<String> = m.edges.iter().map(|e| format!("({},{},{})", e.u, e.v, e.w)).collect();
            format!("mst {} {}; {}", m.total_weight, m.nodes, edges.join(" "))
        }
        TargetOutput::Scc(c) => format!("components {}; {}", c.len(), encode_sets(c)),
        TargetOutput::Bcc(b) => format!("blocks {}; {}", b.len(), encode_sets(b)),
        TargetOutput::Hc(s) => {
            let v: Vec<String> = s.iter().map(f64::to_string).collect();
            format!("centrality {}; {}", s.len(), v.join(" "))
        }
        TargetOutput::Js(s) | TargetOutput::Aa(s) => encode_pair_scores(s),
        TargetOutput::Mm(m) => {
            let mut m = m.clone();
            m.sort_unstable();
            let v: Vec<String> = m.iter().map(|(u, v)| format!("({u},{v})")).collect();
            format!("matching {}; {}", m.len(), v.join(" "))
        }
        TargetOutput::Mfv(v) => format!("flow {v}"),
    }
}

/// Splits `"<word> <count>; <items>"` into the count and the item tokens.
fn counted<'a>(payload: &'a str, word: &str) -> Option<(usize, Vec<&'a str>)> {
    let rest = payload.strip_prefix(word)?.strip_prefix(' ')?;
    let (head, items) = rest.split_once(';')?;
    let items: Vec<&str> = items.split(' ').filter(|s| !s.is_empty()).collect();
    Some((head.trim().parse().ok()?, items))
}

fn parse_tuple<T: std::str::FromStr>(s: &str, open: char, close: char) -> Option<Vec<T>> {
    let inner = s.strip_prefix(open)?.strip_suffix(close)?;
    if inner.is_empty() {
        return Some(Vec::new());
    }
    inner.split(',').map(|x| x.parse().ok()).collect()
}

pub fn decode_output(problem: ProblemId, payload: &str) -> Result<TargetOutput, ProtocolError> {
    let err = || ProtocolError::Payload {
        problem,
        payload: payload.to_string(),
    };
    let out = match problem {
        ProblemId::Spf => match payload {
            "unreachable" => Some(TargetOutput::Spf(SpfOut::Unreachable)),
            "negative_cycle" => Some(TargetOutput::Spf(SpfOut::NegativeCycle)),
            _ => payload
                .strip_prefix("length ")
                .and_then(|l| l.parse().ok())
                .map(|l| TargetOutput::Spf(SpfOut::Length(l))),
        },
        ProblemId::Mfv => payload
            .strip_prefix("flow ")
            .and_then(|v| v.parse().ok())
            .map(TargetOutput::Mfv),
        ProblemId::Scc | ProblemId::Bcc => {
            let word = if problem == ProblemId::Scc { "components" } else { "blocks" };
            counted(payload, word).and_then(|(k, items)| {
                let sets: Option<Vec<Vec<VertexId>>> = items.iter().map(|s| parse_tuple(s, '{', '}')).collect();
                let sets = sets.filter(|s| s.len() == k)?;
                Some(if problem == ProblemId::Scc {
                    TargetOutput::Scc(sets)
                } else {
                    TargetOutput::Bcc(sets)
                })
            })
        }
        ProblemId::Mst => {
            let rest = payload.strip_prefix("mst ");
            rest.and_then(|rest| {
                let (head, items) = rest.split_once(';')?;
                let (w, n) = head.split_once(' ')?;
                let edges: Option<Vec<crate::graph::Edge>> = items
                    .split(' ')
                    .filter(|s| !s.is_empty())
                    .map(|s| {
                        let t: Vec<i64> = parse_tuple(s, '(', ')')?;
                        (t.len() == 3).then(|| crate::graph::Edge::new(t[0] as VertexId, t[1] as VertexId, t[2]))
                    })
                    .collect();
                Some(TargetOutput::Mst(MstOut {
                    edges: edges?,
                    total_weight: w.parse().ok()?,
                    nodes: n.parse().ok()?,
                }))
            })
        }
        ProblemId::Hc => counted(payload, "centrality").and_then(|(k, items)| {
            let v: Option<Vec<f64>> = items.iter().map(|s| s.parse().ok()).collect();
            v.filter(|v| v.len() == k).map(TargetOutput::Hc)
        }),
        ProblemId::Js | ProblemId::Aa => counted(payload, "pairs").and_then(|(k, items)| {
            let scores: Option<Vec<PairScore>> = items
                .iter()
                .map(|s| {
                    let (pair, score) = s.split_once(':')?;
                    let (u, v) = pair.split_once(',')?;
                    Some(PairScore {
                        u: u.parse().ok()?,
                        v: v.parse().ok()?,
                        score: score.parse().ok()?,
                    })
                })
                .collect();
            let scores = scores.filter(|s| s.len() == k)?;
            Some(if problem == ProblemId::Js {
                TargetOutput::Js(scores)
            } else {
                TargetOutput::Aa(scores)
            })
        }),
        ProblemId::Mm => counted(payload, "matching").and_then(|(k, items)| {
            let pairs: Option<Vec<(VertexId, VertexId)>> = items
                .iter()
                .map(|s| {
                    let t: Vec<VertexId> = parse_tuple(s, '(', ')')?;
                    (t.len() == 2).then(|| (t[0], t[1]))
                })
                .collect();
            pairs.filter(|p| p.len() == k).map(TargetOutput::Mm)
        }),
    };
    out.ok_or_else(err)
}

// ---------------------------------------------------------------------------
// Handshake
// ---------------------------------------------------------------------------

pub fn handshake_line(problems: &[ProblemId]) -> String {
    let names: Vec<&str> = problems.iter().map(|p| p.name()).collect();
    format!("{HANDSHAKE_PREFIX} {PROTOCOL_VERSION} {}\n", names.join(" "))
}

pub fn parse_handshake(line: &str) -> Result<Vec<ProblemId>, AdapterError> {
    let mut words = line.trim_end_matches('\n').split(' ');
    if words.next() != Some(HANDSHAKE_PREFIX) {
        return Err(AdapterError::Handshake(format!("unexpected greeting {line:?}")));
    }
    let version = words.next().unwrap_or("");
    if version != PROTOCOL_VERSION.to_string() {
        return Err(AdapterError::ProtocolVersionMismatch {
            found: version.to_string(),
        });
    }
    words
        .filter(|w| !w.is_empty())
        .map(|w| w.parse().map_err(AdapterError::Handshake))
        .collect()
}

// ---------------------------------------------------------------------------
// Engine side: a child process as a target
// ---------------------------------------------------------------------------

enum FromChild {
    Handshake(String),
    Frame(String),
    Broken(String),
}

struct ChildConn {
    child: Child,
    stdin: ChildStdin,
    rx: Receiver<FromChild>,
}

impl ChildConn {
    fn spawn(command: &[String]) -> Result<(Self, Vec<ProblemId>), AdapterError> {
        let (program, args) = command
            .split_first()
            .ok_or_else(|| AdapterError::Handshake("empty adapter command".into()))?;
        let mut child = Command::new(program)
            .args(args)
            .stdin(Stdio::piped())
            .stdout(Stdio::piped())
            .stderr(Stdio::inherit())
            .spawn()
            .map_err(AdapterError::Spawn)?;
        let stdin = child.stdin.take().expect("piped stdin");
        let stdout = child.stdout.take().expect("piped stdout");
        let (tx, rx) = mpsc::channel();
        thread::spawn(move || {
            let mut r = BufReader::new(stdout);
            let mut line = String::new();
            match r.read_line(&mut line) {
                Ok(n) if n > 0 => {
                    if tx.send(FromChild::Handshake(line)).is_err() {
                        return;
                    }
                }
                Ok(_) => {
                    let _ = tx.send(FromChild::Broken("adapter closed its output".into()));
                    return;
                }
                Err(e) => {
                    let _ = tx.send(FromChild::Broken(e.to_string()));
                    return;
                }
            }
            loop {
                let msg = match read_frame(&mut r) {
                    Ok(Some(body)) => FromChild::Frame(body),
                    Ok(None) => FromChild::Broken("adapter closed its output".into()),
                    Err(e) => FromChild::Broken(e.to_string()),
                };
                let stop = matches!(msg, FromChild::Broken(_));
                if tx.send(msg).is_err() || stop {
                    return;
                }
            }
        });
        let mut conn = ChildConn { child, stdin, rx };
        let problems = match conn.rx.recv_timeout(HANDSHAKE_TIMEOUT) {
            Ok(FromChild::Handshake(line)) => parse_handshake(&line),
            Ok(FromChild::Broken(e)) => Err(AdapterError::Handshake(e)),
            Ok(FromChild::Frame(_)) => unreachable!("the reader sends the handshake first"),
            Err(_) => Err(AdapterError::Handshake("no handshake".into())),
        };
        match problems {
            Ok(p) => Ok((conn, p)),
            Err(e) => {
                conn.kill();
                Err(e)
            }
        }
    }

    fn kill(&mut self) {
        let _ = self.child.kill();
        let _ = self.child.wait();
    }
}

impl Drop for ChildConn {
    fn drop(&mut self) {
        self.kill();
    }
}

/// An external implementation driven over protocol v1. Hangs and broken
/// pipes restart the child; the caller only ever sees an [`ExecOutcome`].
pub struct RemoteTarget {
    command: Vec<String>,
    problem: ProblemId,
    conn: Option<ChildConn>,
    next_id: u64,
    restarts: u64,
    protocol_errors: u64,
}

impl RemoteTarget {
    pub fn spawn(command: Vec<String>, problem: ProblemId) -> Result<Self, AdapterError> {
        let mut t = RemoteTarget {
            command,
            problem,
            conn: None,
            next_id: 0,
            restarts: 0,
            protocol_errors: 0,
        };
        t.connect()?;
        Ok(t)
    }

    fn connect(&mut self) -> Result<(), AdapterError> {
        let (conn, problems) = ChildConn::spawn(&self.command)?;
        if !problems.contains(&self.problem) {
            return Err(AdapterError::UnsupportedProblem(self.problem));
        }
        self.conn = Some(conn);
        Ok(())
    }

    fn restart(&mut self) -> Result<(), AdapterError> {
        self.conn = None;
        self.restarts += 1;
        self.connect()
    }

    pub fn restarts(&self) -> u64 {
        self.restarts
    }

    /// Malformed or mismatched responses seen so far.
    pub fn protocol_errors(&self) -> u64 {
        self.protocol_errors
    }

    pub fn execute(&mut self, input: &TargetInput, budget: Duration) -> ExecOutcome {
        let outcome = self.exchange(input, budget);
        let needs_restart = matches!(outcome, Exchange::Hang | Exchange::Broken(_));
        if needs_restart {
            if let Err(e) = self.restart() {
                return ExecOutcome::Crash(format!("adapter restart failed: {e}"));
            }
        }
        match outcome {
            Exchange::Done(o) => o,
            Exchange::Hang => ExecOutcome::Hang,
            Exchange::Broken(msg) => ExecOutcome::Crash(msg),
        }
    }

    fn exchange(&mut self, input: &TargetInput, budget: Duration) -> Exchange {
        let Some(conn) = self.conn.as_mut() else {
            return Exchange::Broken("adapter not running".into());
        };
        self.next_id += 1;
        let req = AdapterRequest {
            id: self.next_id,
            problem: self.problem,
            endpoints: input.endpoints,
            graph: input.graph.clone(),
        };
        if let Err(e) = write_frame(&mut conn.stdin, &req.encode()) {
            return Exchange::Broken(format!("adapter input closed: {e}"));
        }
        match conn.rx.recv_timeout(budget) {
            Ok(FromChild::Frame(body)) => match AdapterResponse::decode(&body, self.problem) {
                Ok(resp) if resp.id == req.id => Exchange::Done(match resp.status {
                    ResponseStatus::Ok(out) => ExecOutcome::Output(out),
                    ResponseStatus::Crash(msg) => ExecOutcome::Crash(msg),
                }),
                Ok(resp) => {
                    self.protocol_errors += 1;
                    Exchange::Broken(format!("response id {} for request {}", resp.id, req.id))
                }
                Err(e) => {
                    self.protocol_errors += 1;
                    Exchange::Done(ExecOutcome::Crash(format!("{e}; raw response {body:?}")))
                }
            },
            Ok(FromChild::Broken(msg)) => Exchange::Broken(msg),
            Ok(FromChild::Handshake(_)) => Exchange::Broken("second handshake".into()),
            Err(RecvTimeoutError::Timeout) => Exchange::Hang,
            Err(RecvTimeoutError::Disconnected) => Exchange::Broken("adapter reader stopped".into()),
        }
    }
}

enum Exchange {
    Done(ExecOutcome),
    Hang,
    Broken(String),
}

// ---------------------------------------------------------------------------
// Adapter side: serving in-process implementations
// ---------------------------------------------------------------------------

/// Options for [`serve`]. `stall_every` makes the adapter stop answering on
/// every k-th request it receives, to exercise the caller's hang handling.
#[derive(Clone, Debug, Default)]
pub struct ServeOptions {
    pub impls: BTreeMap<ProblemId, ImplId>,
    pub stall_every: Option<u64>,
    pub exec_budget: Option<Duration>,
}

impl ServeOptions {
    /// Serves every problem with the second implementation of its default
    /// pair.
    pub fn all_problems() -> Self {
        ServeOptions {
            impls: ProblemId::ALL.iter().map(|&p| (p, p.default_pair().1)).collect(),
            ..Default::default()
        }
    }
}

/// Runs the adapter loop until the request stream ends.
pub fn serve<R: BufRead, W: Write>(mut input: R, mut output: W, opts: &ServeOptions) -> io::Result<()> {
    let problems: Vec<ProblemId> = opts.impls.keys().copied().collect();
    output.write_all(handshake_line(&problems).as_bytes())?;
    output.flush()?;
    let budget = opts.exec_budget.unwrap_or(Duration::from_secs(3600));
    let mut received = 0u64;
    loop {
        let body = match read_frame(&mut input) {
            Ok(Some(b)) => b,
            Ok(None) => return Ok(()),
            Err(e) => return Err(io::Error::new(io::ErrorKind::InvalidData, e.to_string())),
        };
        received += 1;
        if opts.stall_every.is_some_and(|k| k > 0 && received.is_multiple_of(k)) {
            loop {
                thread::park();
            }
        }
        let resp = match AdapterRequest::decode(&body) {
            Err(e) => AdapterResponse {
                id: request_id(&body),
                status: ResponseStatus::Crash(e.to_string()),
            },
            Ok(req) => AdapterResponse {
                id: req.id,
                status: answer(&req, opts, budget),
            },
        };
        write_frame(&mut output, &resp.encode())?;
    }
}

fn request_id(body: &str) -> u64 {
    body.split(' ').nth(1).and_then(|s| s.parse().ok()).unwrap_or(0)
}

fn answer(req: &AdapterRequest, opts: &ServeOptions, budget: Duration) -> ResponseStatus {
    let Some(&imp) = opts.impls.get(&req.problem) else {
        return ResponseStatus::Crash(format!("{} is not served", req.problem));
    };
    let n = req.graph.num_vertices();
    if req.endpoints.s as usize >= n || req.endpoints.t as usize >= n {
        return ResponseStatus::Crash("endpoint out of range".into());
    }
    let input = TargetInput {
        graph: req.graph.clone(),
        endpoints: req.endpoints,
    };
    match execute_fn(imp.function(), &input, None, budget) {
        ExecOutcome::Output(o) => ResponseStatus::Ok(o),
        ExecOutcome::Crash(msg) => ResponseStatus::Crash(msg),
        ExecOutcome::Hang => ResponseStatus::Crash("execution budget exceeded".into()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Edge;

    fn round_trip(problem: ProblemId, out: TargetOutput) {
        let text = encode_output(&out);
        assert!(!text.contains('\n'));
        assert_eq!(decode_output(problem, &text).unwrap(), out, "{text}");
    }

    #[test]
    fn payloads_round_trip() {
        round_trip(ProblemId::Spf, TargetOutput::Spf(SpfOut::Length(-3)));
        round_trip(ProblemId::Spf, TargetOutput::Spf(SpfOut::Unreachable));
        round_trip(ProblemId::Spf, TargetOutput::Spf(SpfOut::NegativeCycle));
        round_trip(ProblemId::Mfv, TargetOutput::Mfv(17));
        round_trip(ProblemId::Scc, TargetOutput::Scc(vec![vec![0, 1], vec![2]]));
        round_trip(ProblemId::Bcc, TargetOutput::Bcc(vec![]));
        round_trip(ProblemId::Hc, TargetOutput::Hc(vec![0.1, 1.0 / 3.0, 2.5]));
        round_trip(ProblemId::Hc, TargetOutput::Hc(vec![]));
        round_trip(
            ProblemId::Js,
            TargetOutput::Js(vec![PairScore { u: 0, v: 1, score: 0.5 }, PairScore { u: 0, v: 2, score: 1e-7 }]),
        );
        round_trip(ProblemId::Aa, TargetOutput::Aa(vec![PairScore { u: 3, v: 9, score: 1.0 / 7f64.ln() }]));
        round_trip(ProblemId::Mm, TargetOutput::Mm(vec![(0, 1), (2, 5)]));
        round_trip(
            ProblemId::Mst,
            TargetOutput::Mst(MstOut {
                edges: vec![Edge::new(0, 1, 4), Edge::new(1, 2, 9)],
                total_weight: 13,
                nodes: 4,
            }),
        );
    }

    #[test]
    fn documented_payloads() {
        assert_eq!(encode_output(&TargetOutput::Spf(SpfOut::Length(3))), "length 3");
        assert_eq!(encode_output(&TargetOutput::Scc(vec![vec![1, 0]])), "components 1; {0,1}");
    }

    #[test]
    fn frames_round_trip() {
        let mut buf = Vec::new();
        write_frame(&mut buf, "REQ 1 SPF 0 0\nD 1 0\n").unwrap();
        write_frame(&mut buf, "RESP 1 ok length 0\n").unwrap();
        let mut r = io::Cursor::new(buf);
        assert_eq!(read_frame(&mut r).unwrap().unwrap(), "REQ 1 SPF 0 0\nD 1 0\n");
        assert_eq!(read_frame(&mut r).unwrap().unwrap(), "RESP 1 ok length 0\n");
        assert!(read_frame(&mut r).unwrap().is_none());
    }

    #[test]
    fn request_round_trip() {
        let req = AdapterRequest {
            id: 7,
            problem: ProblemId::Spf,
            endpoints: EndpointPair { s: 0, t: 1 },
            graph: Graph::from_edges(true, 2, [Edge::new(0, 1, 3)]).unwrap(),
        };
        let body = req.encode();
        assert_eq!(body, "REQ 7 SPF 0 1\nD 2 1\n0 1 3\n");
        assert_eq!(AdapterRequest::decode(&body).unwrap(), req);
    }

    #[test]
    fn handshake_versions() {
        let line = handshake_line(&[ProblemId::Spf, ProblemId::Scc]);
        assert_eq!(line, "GRAPHFUZZ-ADAPTER 1 SPF SCC\n");
        assert_eq!(parse_handshake(&line).unwrap(), vec![ProblemId::Spf, ProblemId::Scc]);
        assert!(matches!(
            parse_handshake("GRAPHFUZZ-ADAPTER 2 SPF\n"),
            Err(AdapterError::ProtocolVersionMismatch { .. })
        ));
    }

    #[test]
    fn serve_answers_and_reports_bad_requests() {
        let mut reqs = Vec::new();
        write_frame(&mut reqs, "REQ 1 SPF 0 0\nD 1 0\n").unwrap();
        write_frame(&mut reqs, "REQ 2 SPF 0 0\nD 2 1\n0 5 1\n").unwrap();
        write_frame(&mut reqs, "REQ 3 SCC 0 1\nD 2 2\n0 1 1\n1 0 1\n").unwrap();
        let mut out = Vec::new();
        serve(io::Cursor::new(reqs), &mut out, &ServeOptions::all_problems()).unwrap();
        let mut r = io::Cursor::new(out);
        let mut hs = String::new();
        r.read_line(&mut hs).unwrap();
        assert!(hs.starts_with("GRAPHFUZZ-ADAPTER 1 SPF MST"));
        let first = AdapterResponse::decode(&read_frame(&mut r).unwrap().unwrap(), ProblemId::Spf).unwrap();
        assert_eq!(first.status, ResponseStatus::Ok(TargetOutput::Spf(SpfOut::Length(0))));
        let second = AdapterResponse::decode(&read_frame(&mut r).unwrap().unwrap(), ProblemId::Spf).unwrap();
        assert_eq!(second.id, 2);
        assert!(matches!(second.status, ResponseStatus::Crash(_)));
        let third = read_frame(&mut r).unwrap().unwrap();
        assert_eq!(third, "RESP 3 ok components 1; {0,1}\n");
    }
}

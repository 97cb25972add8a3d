use std::fs::File;
use std::io::{self, BufReader, Read, Write};
use std::path::Path;

use flate2::read::MultiGzDecoder;
use serde::{Deserialize, Serialize};

use super::{normalize_bases, Fragment, FragmentError, FragmentSet};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ReadFormat {
    Fasta,
    Fastq,
    /// Decide from the first non-blank byte.
    Auto,
}

/// Lines of a buffer with the byte offset each one starts at. Trailing
/// `\r` is stripped.
fn lines_with_offsets(buf: &[u8]) -> impl Iterator<Item = (usize, &[u8])> {
    let mut offset = 0;
    buf.split(|&b| b == b'\n').map(move |line| {
        let start = offset;
        offset += line.len() + 1;
        let line = line.strip_suffix(b"\r").unwrap_or(line);
        (start, line)
    })
}

fn is_blank(line: &[u8]) -> bool {
    line.iter().all(u8::is_ascii_whitespace)
}

fn label_of(header: &[u8]) -> Option<String> {
    let name = String::from_utf8_lossy(&header[1..]).trim().to_string();
    (!name.is_empty()).then_some(name)
}

/// Parses FASTA or FASTQ records into a fragment set, in file order.
pub fn parse_reads<R: Read>(mut input: R, format: ReadFormat) -> Result<FragmentSet, FragmentError> {
    let mut buf = Vec::new();
    input
        .read_to_end(&mut buf)
        .map_err(|source| FragmentError::Io {
            context: "reading input".into(),
            source,
        })?;
    let format = match format {
        ReadFormat::Auto => match buf.iter().find(|b| !b.is_ascii_whitespace()) {
            None => return Err(FragmentError::NoFragments),
            Some(b'>') => ReadFormat::Fasta,
            Some(b'@') => ReadFormat::Fastq,
            Some(&other) => {
                return Err(FragmentError::MalformedRecord {
                    record: 1,
                    reason: format!("expected '>' or '@', found {:?}", other as char),
                })
            }
        },
        f => f,
    };
    let fragments = match format {
        ReadFormat::Fasta => parse_fasta(&buf)?,
        _ => parse_fastq(&buf)?,
    };
    FragmentSet::from_fragments(fragments)
}

fn parse_fasta(buf: &[u8]) -> Result<Vec<Fragment>, FragmentError> {
    let mut out: Vec<Fragment> = Vec::new();
    let mut current: Option<(Option<String>, Vec<u8>)> = None;
    let finish = |out: &mut Vec<Fragment>, rec: (Option<String>, Vec<u8>)| {
        let record = out.len() + 1;
        if rec.1.is_empty() {
            return Err(FragmentError::MalformedRecord {
                record,
                reason: "empty sequence".into(),
            });
        }
        out.push(Fragment {
            id: out.len(),
            bases: rec.1,
            source_label: rec.0,
        });
        Ok(())
    };
    for (offset, line) in lines_with_offsets(buf) {
        if line.first() == Some(&b'>') {
            if let Some(rec) = current.take() {
                finish(&mut out, rec)?;
            }
            current = Some((label_of(line), Vec::new()));
        } else if is_blank(line) {
            continue;
        } else {
            let Some((_, seq)) = current.as_mut() else {
                return Err(FragmentError::MalformedRecord {
                    record: 1,
                    reason: "sequence data before the first '>' header".into(),
                });
            };
            let trimmed_len = line.iter().rposition(|b| !b.is_ascii_whitespace()).map_or(0, |p| p + 1);
            seq.extend(normalize_bases(&line[..trimmed_len], offset)?);
        }
    }
    if let Some(rec) = current.take() {
        finish(&mut out, rec)?;
    }
    Ok(out)
}

fn parse_fastq(buf: &[u8]) -> Result<Vec<Fragment>, FragmentError> {
    let mut out = Vec::new();
    let mut lines = lines_with_offsets(buf).filter(|(_, l)| !is_blank(l));
    while let Some((_, header)) = lines.next() {
        let record = out.len() + 1;
        let malformed = |reason: &str| FragmentError::MalformedRecord {
            record,
            reason: reason.to_string(),
        };
        if header.first() != Some(&b'@') {
            return Err(malformed("header must start with '@'"));
        }
        let (seq_offset, seq) = lines.next().ok_or_else(|| malformed("missing sequence line"))?;
        let (_, plus) = lines.next().ok_or_else(|| malformed("missing '+' line"))?;
        if plus.first() != Some(&b'+') {
            return Err(malformed("separator line must start with '+'"));
        }
        let (_, qual) = lines.next().ok_or_else(|| malformed("missing quality line"))?;
        let seq = seq.trim_ascii_end();
        let qual = qual.trim_ascii_end();
        if seq.len() != qual.len() {
            return Err(malformed(&format!(
                "sequence length {} != quality length {}",
                seq.len(),
                qual.len()
            )));
        }
        let bases = normalize_bases(seq, seq_offset)?;
        if bases.is_empty() {
            return Err(malformed("empty sequence"));
        }
        out.push(Fragment {
            id: out.len(),
            bases,
            source_label: label_of(header),
        });
    }
    Ok(out)
}

/// Reads a FASTA/FASTQ file, or standard input for `-`. Files ending in
/// `.gz` are decompressed.
pub fn read_path(path: &Path) -> Result<FragmentSet, FragmentError> {
    let io_err = |source| FragmentError::Io {
        context: path.display().to_string(),
        source,
    };
    if path.as_os_str() == "-" {
        return parse_reads(io::stdin().lock(), ReadFormat::Auto);
    }
    let file = File::open(path).map_err(io_err)?;
    let gz = path.extension().is_some_and(|e| e == "gz");
    let reader: Box<dyn Read> = if gz {
        Box::new(MultiGzDecoder::new(BufReader::new(file)))
    } else {
        Box::new(BufReader::new(file))
    };
    parse_reads(reader, ReadFormat::Auto).map_err(|e| match e {
        FragmentError::Io { source, .. } => io_err(source),
        other => other,
    })
}

/// Writes the set as FASTA, one sequence line per record. Reads without a
/// label are named `frag_<id>`.
pub fn write_fasta<W: Write>(set: &FragmentSet, mut out: W) -> io::Result<()> {
    for f in set.iter() {
        match &f.source_label {
            Some(label) => writeln!(out, ">{label}")?,
            None => writeln!(out, ">frag_{}", f.id)?,
        }
        out.write_all(f.bases())?;
        out.write_all(b"\n")?;
    }
    Ok(())
}

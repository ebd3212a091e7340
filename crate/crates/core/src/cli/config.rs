//! `--config <path>`: a key=value file whose entries become flag defaults.
//!
//! Entries are spliced in right after the subcommand name, so flags given on
//! the command line (which come later) override them.

use std::ffi::OsString;
use std::fs;

use super::CliError;

/// Parses `key = value` lines; `#` starts a comment line.
pub fn parse_config(text: &str) -> Result<Vec<(String, String)>, CliError> {
    let mut entries = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| CliError::Usage(format!("config line {}: expected key=value", n + 1)))?;
        let key = key.trim().trim_start_matches("--").replace('_', "-");
        if key.is_empty() {
            return Err(CliError::Usage(format!("config line {}: empty key", n + 1)));
        }
        entries.push((key, value.trim().to_string()));
    }
    Ok(entries)
}

fn to_flags(entries: &[(String, String)]) -> Vec<OsString> {
    let mut out = Vec::new();
    for (k, v) in entries {
        match v.as_str() {
            "true" => out.push(format!("--{k}").into()),
            "false" => {}
            _ => out.push(format!("--{k}={v}").into()),
        }
    }
    out
}

/// Removes `--config <path>` from `argv` and inserts the file's flags after the
/// subcommand.
pub fn splice_config(argv: Vec<OsString>) -> Result<Vec<OsString>, CliError> {
    let mut path = None;
    let mut rest = Vec::with_capacity(argv.len());
    let mut it = argv.into_iter();
    while let Some(arg) = it.next() {
        let s = arg.to_string_lossy();
        if s == "--config" {
            let p = it
                .next()
                .ok_or_else(|| CliError::Usage("--config needs a path".into()))?;
            path = Some(p);
        } else if let Some(p) = s.strip_prefix("--config=") {
            path = Some(OsString::from(p));
        } else {
            rest.push(arg);
        }
    }
    let Some(path) = path else {
        return Ok(rest);
    };
    let text = fs::read_to_string(&path)
        .map_err(|e| CliError::Runtime(format!("cannot read config {}: {e}", path.to_string_lossy())))?;
    let flags = to_flags(&parse_config(&text)?);
    // first non-flag argument after the program name is the subcommand
    let sub = rest
        .iter()
        .skip(1)
        .position(|a| !a.to_string_lossy().starts_with('-'))
        .map(|i| i + 2)
        .unwrap_or(rest.len());
    let mut out = rest[..sub].to_vec();
    out.extend(flags);
    out.extend_from_slice(&rest[sub..]);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_entries_and_comments() {
        let e = parse_config("# sweep defaults\nd = 3\nbeta_h_omega_h=0.01\n\nforce = true\n").unwrap();
        assert_eq!(
            e,
            vec![
                ("d".to_string(), "3".to_string()),
                ("beta-h-omega-h".to_string(), "0.01".to_string()),
                ("force".to_string(), "true".to_string()),
            ]
        );
        assert!(parse_config("d 3").is_err());
    }

    #[test]
    fn flags_are_inserted_before_user_flags() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.cfg");
        fs::write(&path, "d = 2\nomega-c = 0.5\n").unwrap();
        let argv: Vec<OsString> = ["catotto", "cycle", "--config", path.to_str().unwrap(), "--d", "3"]
            .iter()
            .map(OsString::from)
            .collect();
        let out = splice_config(argv).unwrap();
        let out: Vec<String> = out.iter().map(|a| a.to_string_lossy().into_owned()).collect();
        assert_eq!(out, vec!["catotto", "cycle", "--d=2", "--omega-c=0.5", "--d", "3"]);
    }
}

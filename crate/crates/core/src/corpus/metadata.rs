//! Desk-scale client for the publications office SPARQL endpoint.
//!
//! One GET per CELEX id:
//! `{endpoint}?query=<SPARQL>&format=application/sparql-results+json`,
//! selecting the work's document date, resource type and directory code.
//! Requests are issued sequentially, at least `min_interval` apart, and
//! results come back in request order.

use std::thread;
use std::time::{Duration, Instant};

use serde::Deserialize;
use url::Url;

use super::{CorpusError, DocumentMetadata, LegalForm};

pub const DEFAULT_ENDPOINT: &str = "https://publications.europa.eu/webapi/rdf/sparql";

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct MetadataFetch {
    /// One record per resolved id, in request order.
    pub records: Vec<DocumentMetadata>,
    /// Ids the endpoint could not resolve, with the reason.
    pub unresolved: Vec<(String, String)>,
}

#[derive(Debug, Clone)]
pub struct MetadataClient {
    endpoint: Url,
    pub min_interval: Duration,
    pub timeout: Duration,
}

#[derive(Deserialize)]
struct SparqlResponse {
    results: SparqlResults,
}

#[derive(Deserialize)]
struct SparqlResults {
    bindings: Vec<std::collections::HashMap<String, SparqlValue>>,
}

#[derive(Deserialize)]
struct SparqlValue {
    value: String,
}

fn query_for(celex_id: &str) -> String {
    format!(
        "PREFIX cdm: <http://publications.europa.eu/ontology/cdm#>\n\
         SELECT ?date ?type ?dircode WHERE {{\n\
         ?work cdm:resource_legal_id_celex \"{celex_id}\"^^<http://www.w3.org/2001/XMLSchema#string> .\n\
         OPTIONAL {{ ?work cdm:work_date_document ?date }}\n\
         OPTIONAL {{ ?work cdm:work_has_resource-type ?type }}\n\
         OPTIONAL {{ ?work cdm:resource_legal_is_about_concept_directory-code ?dircode }}\n\
         }}"
    )
}

fn last_segment(uri: &str) -> &str {
    uri.rsplit(['/', '#']).next().unwrap_or(uri)
}

fn legal_form_from_type(type_uri: &str) -> Option<LegalForm> {
    let code = last_segment(type_uri);
    if code.starts_with("REG") {
        Some(LegalForm::Regulation)
    } else if code.starts_with("DIR") {
        Some(LegalForm::Directive)
    } else if code.starts_with("DEC") {
        Some(LegalForm::Decision)
    } else {
        None
    }
}

/// Top-level directory chapter: the first two digits of the code.
fn policy_area_from_dircode(uri: &str) -> Option<String> {
    let digits: String = last_segment(uri)
        .chars()
        .filter(char::is_ascii_digit)
        .take(2)
        .collect();
    (digits.len() == 2).then_some(digits)
}

/// Turns one SPARQL JSON body into a record, or the reason it cannot.
fn parse_response(celex_id: &str, body: &str) -> Result<Result<DocumentMetadata, String>, CorpusError> {
    let parsed: SparqlResponse = serde_json::from_str(body)
        .map_err(|e| CorpusError::MalformedResponse(format!("{celex_id}: {e}")))?;
    let bindings = &parsed.results.bindings;
    if bindings.is_empty() {
        return Ok(Err("unknown CELEX id".into()));
    }
    let field = |name: &str| bindings.iter().find_map(|b| b.get(name).map(|v| v.value.as_str()));
    let Some(date) = field("date") else {
        return Ok(Err("no document date".into()));
    };
    let adoption_year: i32 = date
        .get(..4)
        .and_then(|y| y.parse().ok())
        .ok_or_else(|| CorpusError::MalformedResponse(format!("{celex_id}: bad date {date:?}")))?;
    let Some(policy_area) = bindings
        .iter()
        .filter_map(|b| b.get("dircode"))
        .find_map(|v| policy_area_from_dircode(&v.value))
    else {
        return Ok(Err("no directory code".into()));
    };
    let legal_form = bindings
        .iter()
        .filter_map(|b| b.get("type"))
        .find_map(|v| legal_form_from_type(&v.value))
        .unwrap_or_else(|| LegalForm::from_celex(celex_id));
    let record = DocumentMetadata {
        celex_id: celex_id.to_owned(),
        adoption_year,
        policy_area,
        legal_form,
    };
    Ok(record.validate().map(|()| record))
}

impl MetadataClient {
    pub fn new(endpoint: &str) -> Result<Self, CorpusError> {
        let endpoint = Url::parse(endpoint)
            .map_err(|e| CorpusError::Network(format!("invalid endpoint {endpoint:?}: {e}")))?;
        Ok(Self {
            endpoint,
            min_interval: Duration::from_millis(500),
            timeout: Duration::from_secs(30),
        })
    }

    pub fn fetch(&self, celex_ids: &[String]) -> Result<MetadataFetch, CorpusError> {
        let mut out = MetadataFetch::default();
        if celex_ids.is_empty() {
            return Ok(out);
        }
        let agent: ureq::Agent = ureq::Agent::config_builder()
            .timeout_global(Some(self.timeout))
            .http_status_as_error(false)
            .build()
            .into();
        let mut last: Option<Instant> = None;
        for id in celex_ids {
            if let Some(t) = last {
                let elapsed = t.elapsed();
                if elapsed < self.min_interval {
                    thread::sleep(self.min_interval - elapsed);
                }
            }
            last = Some(Instant::now());
            let mut response = agent
                .get(self.endpoint.as_str())
                .query("query", query_for(id))
                .query("format", "application/sparql-results+json")
                .call()
                .map_err(|e| CorpusError::Network(e.to_string()))?;
            let status = response.status();
            if status.is_server_error() {
                return Err(CorpusError::Network(format!("{id}: HTTP {status}")));
            }
            let body = response
                .body_mut()
                .read_to_string()
                .map_err(|e| CorpusError::Network(e.to_string()))?;
            if !status.is_success() {
                out.unresolved.push((id.clone(), format!("HTTP {status}")));
                continue;
            }
            match parse_response(id, &body)? {
                Ok(record) => out.records.push(record),
                Err(reason) => out.unresolved.push((id.clone(), reason)),
            }
        }
        Ok(out)
    }
}

/// Fetches metadata for `celex_ids` from `endpoint` with default pacing.
pub fn fetch_metadata(celex_ids: &[String], endpoint: &str) -> Result<MetadataFetch, CorpusError> {
    MetadataClient::new(endpoint)?.fetch(celex_ids)
}

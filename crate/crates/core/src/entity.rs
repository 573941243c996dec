//! Item labels and lexicalization links, standing in for the external
//! knowledge base.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::content::ItemId;
use crate::docs::{self, DocumentError};

/// Language tried after the requested one when a label is missing.
pub const FALLBACK_LANGUAGE: &str = "en";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Item {
    pub id: ItemId,
    pub labels: BTreeMap<String, String>,
    /// Noun phrase (or, for properties, adjective) lexeme per language.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub lexemes: BTreeMap<String, String>,
}

impl Item {
    pub fn new(id: ItemId) -> Self {
        Item {
            id,
            labels: BTreeMap::new(),
            lexemes: BTreeMap::new(),
        }
    }

    pub fn label(mut self, lang: &str, text: &str) -> Self {
        self.labels.insert(lang.to_string(), text.to_string());
        self
    }

    pub fn lexeme(mut self, lang: &str, lexeme_id: &str) -> Self {
        self.lexemes.insert(lang.to_string(), lexeme_id.to_string());
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Label {
    pub text: String,
    pub language: String,
    /// True when the label comes from a language other than the requested one.
    pub fallback: bool,
}

#[derive(Debug, thiserror::Error)]
pub enum EntityError {
    #[error("UNKNOWN_ITEM: no item {0}")]
    UnknownItem(ItemId),
    #[error("PARSE_ERROR: {0}")]
    Parse(String),
    #[error("NETWORK_ERROR: {0}")]
    Network(String),
    #[error(transparent)]
    Document(#[from] DocumentError),
}

/// Item documents hold a list so several items can ship in one file.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ItemDocument {
    pub items: Vec<Item>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct EntityStore {
    items: BTreeMap<ItemId, Item>,
}

impl EntityStore {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn get(&self, id: &ItemId) -> Option<&Item> {
        self.items.get(id)
    }

    pub fn iter(&self) -> impl Iterator<Item = &Item> {
        self.items.values()
    }

    /// Inserts or replaces an item. Items must carry at least one label.
    pub fn upsert(&mut self, item: Item) -> Result<(), EntityError> {
        check(&item)?;
        self.items.insert(item.id.clone(), item);
        Ok(())
    }

    pub fn remove(&mut self, id: &ItemId) -> Option<Item> {
        self.items.remove(id)
    }

    /// Label in `lang`, else English, else the first available label.
    pub fn get_label(&self, id: &ItemId, lang: &str) -> Result<Label, EntityError> {
        let item = self.items.get(id).ok_or_else(|| EntityError::UnknownItem(id.clone()))?;
        let found = item
            .labels
            .get_key_value(lang)
            .or_else(|| item.labels.get_key_value(FALLBACK_LANGUAGE))
            .or_else(|| item.labels.iter().next())
            .expect("items always have a label");
        Ok(Label {
            text: found.1.clone(),
            language: found.0.clone(),
            fallback: found.0 != lang,
        })
    }

    /// Items whose label in `lang` is exactly `text`.
    pub fn find_by_label(&self, text: &str, lang: &str) -> Vec<&Item> {
        self.items
            .values()
            .filter(|i| i.labels.get(lang).is_some_and(|l| l == text))
            .collect()
    }

    /// Upserts every item in a JSON item document. The store is left
    /// untouched if the document is malformed. Returns the number of items
    /// in the document.
    pub fn import_items(&mut self, source: &str) -> Result<usize, EntityError> {
        let doc: ItemDocument = serde_json::from_str(source).map_err(|e| EntityError::Parse(e.to_string()))?;
        for item in &doc.items {
            check(item)?;
        }
        let n = doc.items.len();
        for item in doc.items {
            self.items.insert(item.id.clone(), item);
        }
        Ok(n)
    }

    pub fn load_dir(dir: &Path) -> Result<Self, EntityError> {
        let mut store = EntityStore::new();
        for (path, doc) in docs::load_dir::<ItemDocument>(dir)? {
            for item in doc.items {
                check(&item).map_err(|e| EntityError::Parse(format!("{}: {e}", path.display())))?;
                store.items.insert(item.id.clone(), item);
            }
        }
        Ok(store)
    }

    pub fn save_item(dir: &Path, item: &Item) -> Result<(), EntityError> {
        docs::write_document(
            dir,
            item.id.as_str(),
            &ItemDocument {
                items: vec![item.clone()],
            },
        )?;
        Ok(())
    }

    /// Item ids referenced by `content` that this store does not know.
    pub fn unresolved(&self, content: &crate::content::Content) -> Vec<ItemId> {
        let mut missing: Vec<ItemId> = content
            .item_refs()
            .into_iter()
            .filter(|id| !self.items.contains_key(id))
            .collect();
        missing.dedup();
        missing
    }
}

fn check(item: &Item) -> Result<(), EntityError> {
    if item.labels.is_empty() {
        return Err(EntityError::Parse(format!("item {} has no labels", item.id)));
    }
    Ok(())
}

/// Maps one entity of a `wbgetentities`-style response
/// (`{"entities": {"Q62": {"labels": {"en": {"value": ...}}}}}`) to an item.
pub fn item_from_entity_json(id: &ItemId, response: &serde_json::Value) -> Result<Item, EntityError> {
    let entity = response
        .get("entities")
        .and_then(|e| e.get(id.as_str()))
        .ok_or_else(|| EntityError::Parse(format!("response has no entity {id}")))?;
    if entity.get("missing").is_some() {
        return Err(EntityError::UnknownItem(id.clone()));
    }
    let mut item = Item::new(id.clone());
    if let Some(labels) = entity.get("labels").and_then(|l| l.as_object()) {
        for (lang, label) in labels {
            if let Some(text) = label.get("value").and_then(|v| v.as_str()) {
                item.labels.insert(lang.clone(), text.to_string());
            }
        }
    }
    check(&item)?;
    Ok(item)
}

/// Client for a remote entity API. Disabled unless built with the
/// `remote` feature; all shipped tests run offline.
#[derive(Debug, Clone)]
pub struct RemoteEntityClient {
    pub base_url: String,
}

impl Default for RemoteEntityClient {
    fn default() -> Self {
        RemoteEntityClient {
            base_url: "https://www.wikidata.org/w/api.php".to_string(),
        }
    }
}

impl RemoteEntityClient {
    pub fn new(base_url: impl Into<String>) -> Self {
        RemoteEntityClient {
            base_url: base_url.into(),
        }
    }

    pub fn request_url(&self, id: &ItemId) -> String {
        format!(
            "{}?action=wbgetentities&ids={}&props=labels&format=json",
            self.base_url.trim_end_matches('/'),
            id
        )
    }

    #[cfg(feature = "remote")]
    pub fn fetch_remote(&self, id: &ItemId) -> Result<Item, EntityError> {
        let response: serde_json::Value = reqwest::blocking::get(self.request_url(id))
            .and_then(|r| r.error_for_status())
            .and_then(|r| r.json())
            .map_err(|e| EntityError::Network(e.to_string()))?;
        item_from_entity_json(id, &response)
    }

    #[cfg(not(feature = "remote"))]
    pub fn fetch_remote(&self, _id: &ItemId) -> Result<Item, EntityError> {
        Err(EntityError::Network(
            "remote fetch is not compiled in (enable the `remote` feature)".to_string(),
        ))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> ItemId {
        ItemId::new(s).unwrap()
    }

    #[test]
    fn label_fallback_chain() {
        let mut s = EntityStore::new();
        s.upsert(Item::new(q("Q62")).label("en", "San Francisco")).unwrap();
        s.upsert(Item::new(q("Q7")).label("fr", "Sept")).unwrap();
        let l = s.get_label(&q("Q62"), "en").unwrap();
        assert_eq!((l.text.as_str(), l.fallback), ("San Francisco", false));
        let l = s.get_label(&q("Q62"), "tw").unwrap();
        assert_eq!((l.text.as_str(), l.fallback), ("San Francisco", true));
        let l = s.get_label(&q("Q7"), "de").unwrap();
        assert_eq!((l.text.as_str(), l.language.as_str()), ("Sept", "fr"));
        assert!(matches!(s.get_label(&q("Q8"), "en"), Err(EntityError::UnknownItem(_))));
    }

    #[test]
    fn malformed_import_leaves_store_unchanged() {
        let mut s = EntityStore::new();
        s.import_items(r#"{"items": [{"id": "Q1", "labels": {"en": "one"}}]}"#).unwrap();
        let before = s.clone();
        assert!(matches!(s.import_items("{\"items\": [").unwrap_err(), EntityError::Parse(_)));
        assert!(s.import_items(r#"{"items": [{"id": "Q2", "labels": {"en": "two"}}, {"id": "Q3", "labels": {}}]}"#).is_err());
        assert!(s.import_items(r#"{"items": [{"id": "Q0", "labels": {"en": "zero"}}]}"#).is_err());
        assert_eq!(s, before);
    }

    #[test]
    fn entity_api_mapping() {
        let resp = serde_json::json!({
            "entities": {"Q62": {"id": "Q62", "labels": {
                "en": {"language": "en", "value": "San Francisco"},
                "de": {"language": "de", "value": "San Francisco"}}}}
        });
        let item = item_from_entity_json(&q("Q62"), &resp).unwrap();
        assert_eq!(item.labels.len(), 2);
        let missing = serde_json::json!({"entities": {"Q9": {"id": "Q9", "missing": ""}}});
        assert!(matches!(item_from_entity_json(&q("Q9"), &missing), Err(EntityError::UnknownItem(_))));
        assert!(RemoteEntityClient::default().request_url(&q("Q62")).contains("ids=Q62"));
    }
}

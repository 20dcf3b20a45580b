//! Dialogue-act utilities: act-slot vocabularies and binary DA vectors,
//! delexicalization, slot error rate, and the random retrieval baseline.

mod acts;
mod baseline;
mod delex;

pub use acts::{
    build_da_vocabulary, encode_da_vector, DASignature, DAVector, DaVocabulary, DialogueAct,
    DialogueActSet, SPECIAL_VALUES,
};
pub use baseline::{BaselineIndex, BuildReport, Generation};
pub use delex::{
    delexicalize, is_placeholder, placeholder_for, relexicalize, slot_error_rate, Delexicalized,
    Substitution,
};

"""lexiforge: learn synonymous multiword expressions for lexicon verb senses.

Given a seed transitive-verb sense in an ontology-grounded semantic
lexicon, the learner builds semantically correct seed sentences, asks an
LLM for synonymous MWEs, gathers evidence sentences (from the LLM or
from a corpus), validates them, and clones the seed sense into new,
reviewable lexicon entries.
"""

from .corpus import CorpusIndex, Hit, build_index, find_sentences, tokenize
from .errors import (
    BackendError,
    ConfigError,
    DuplicateSenseError,
    LexiforgeError,
    MissingSlotError,
    RenderError,
    ResourceError,
    ResponseFormatError,
    UnknownConceptError,
    UnrecordedPromptError,
)
from .filtering import Segment, filter_candidates, parse_mwe_list, segment
from .gmr import Gmr, SemanticTemplate, build_template, eligible_fillers, instantiate
from .lexicon import (
    ExtraLexItem,
    LexSense,
    Lexicon,
    SemStruc,
    SynStruc,
    load_lexicon,
    save_lexicon,
)
from .morphology import MweVariant, VerbParadigm, inflect, mwe_variants, verb_forms
from .nlg import choose_article, realize, realize_all
from .ontology import Concept, Ontology, load_ontology
from .pipeline import RunConfig, RunLedger, clone_sense, learn, review
from .prompts import (
    ChainContext,
    HttpBackend,
    ModelParams,
    PromptTemplate,
    RecordingBackend,
    ReplayBackend,
    load_templates,
    render,
    replay_record,
    run_step,
)
from .validation import CandidateMwe, build_validation_bindings, decide, parse_validated

__version__ = "0.1.0"

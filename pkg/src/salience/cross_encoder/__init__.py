"""Cross-encoder salience model: input construction, deciles, scoring, training."""

from salience.cross_encoder.deciles import (
    N_DECILES,
    DecileVector,
    decile_index,
    decile_vector,
    decile_vector_from_starts,
)
from salience.cross_encoder.inputs import EncoderInput, InputMode, build_input
from salience.cross_encoder.model import (
    BCE_EPS,
    CrossEncoderScorer,
    LinearPositionEncoder,
    PositionEmbeddingTable,
    SalienceHead,
    SalienceScore,
    TinyTransformerBackbone,
    bce_loss,
    score,
)
from salience.cross_encoder.tokenizer import HashingTokenizer, Token
from salience.cross_encoder.training import (
    LR_GRID,
    EncodedExample,
    EpochRecord,
    TrainConfig,
    TrainResult,
    build_scorer,
    encode_corpus,
    evaluate_scorer,
    load_checkpoint,
    make_tokenizer,
    predict_corpus,
    save_checkpoint,
    train,
    write_train_log,
)

__all__ = [
    "BCE_EPS",
    "CrossEncoderScorer",
    "DecileVector",
    "EncodedExample",
    "EncoderInput",
    "EpochRecord",
    "HashingTokenizer",
    "InputMode",
    "LR_GRID",
    "LinearPositionEncoder",
    "N_DECILES",
    "PositionEmbeddingTable",
    "SalienceHead",
    "SalienceScore",
    "TinyTransformerBackbone",
    "Token",
    "TrainConfig",
    "TrainResult",
    "bce_loss",
    "build_input",
    "build_scorer",
    "decile_index",
    "decile_vector",
    "decile_vector_from_starts",
    "encode_corpus",
    "evaluate_scorer",
    "load_checkpoint",
    "make_tokenizer",
    "predict_corpus",
    "save_checkpoint",
    "score",
    "train",
    "write_train_log",
]

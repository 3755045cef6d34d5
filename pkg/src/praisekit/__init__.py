"""praisekit: highlight and score effort/outcome praise in tutor responses.

The library tokenizes tutor responses, aligns model-extracted praise phrases
to token spans, scores highlights against expert gold spans with a family of
overlap metrics (including a false-positive-tolerant modified IoU), runs the
seeded prompting/fine-tuning experiment protocol, and turns highlights into
templated explanatory feedback for trainee tutors.
"""
from .annotation import (
    AnnotatedResponse,
    Corpus,
    LabelDistribution,
    PraiseLabel,
    PraiseType,
    TypedSpan,
    annotate,
    dump_corpus,
    from_io_labels,
    label_distribution,
    load_corpus,
    load_corpus_file,
    to_io_labels,
    with_predicted,
)
from .bundled import fixture_path, load_mini_corpus, mini_corpus_path
from .errors import PraiseKitError
from .experiment import (
    EvaluationResult,
    Partition,
    PartitionPlan,
    RatingRecord,
    ScoreRecord,
    SplitSpec,
    correlate_ratings,
    emit_finetune_dataset,
    make_partitions,
    read_ratings,
    run_evaluation,
    split_train_test,
    summarize_runs,
    summarize_scores,
)
from .feedback import (
    FeedbackMessage,
    HighlightMarkup,
    Verdict,
    compose_feedback,
    render_highlight_markup,
)
from .llm import (
    AlignmentReport,
    ChatMessage,
    ClientConfig,
    ExtractionResult,
    HttpChatClient,
    PromptBundle,
    RecordingChatClient,
    ReplayChatClient,
    align_extraction,
    build_highlight_prompt,
    extract_praise,
    parse_extraction,
    request_digest,
)
from .metrics import (
    ConfusionCounts,
    MiouConfig,
    SummaryStats,
    aggregate,
    cohen_kappa,
    confusion_counts,
    f1_score,
    iou_score,
    normalize_likert,
    pearson_r,
    span_miou,
    token_miou,
)
from .textcore import PhraseMatch, Token, TokenList, locate_phrase, tokenize

__version__ = "0.1.0"

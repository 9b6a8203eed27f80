"""Zero-shot prompting harness for instruction-tuned LLM adapters."""

from salience.zeroshot.adapters import (
    ConstantAnswerAdapter,
    GenerationRequest,
    KeywordFrequencyAdapter,
    LLMAdapter,
    get_adapter,
)
from salience.zeroshot.harness import (
    ABSTAIN,
    DEFAULT_BUDGET_TOKENS,
    PromptRunRecord,
    RenderedPrompt,
    parse_answer,
    prediction_pairs,
    render_prompt,
    run_prompting,
    write_prompt_records,
)
from salience.zeroshot.templates import GenerationParams, PromptTemplate, TemplateId, load_template

__all__ = [
    "ABSTAIN",
    "ConstantAnswerAdapter",
    "DEFAULT_BUDGET_TOKENS",
    "GenerationParams",
    "GenerationRequest",
    "KeywordFrequencyAdapter",
    "LLMAdapter",
    "PromptRunRecord",
    "PromptTemplate",
    "RenderedPrompt",
    "TemplateId",
    "get_adapter",
    "load_template",
    "parse_answer",
    "prediction_pairs",
    "render_prompt",
    "run_prompting",
    "write_prompt_records",
]

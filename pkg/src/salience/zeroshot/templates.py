"""Versioned prompt templates and frozen generation parameters."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from importlib import resources

from salience.errors import ConfigError


class TemplateId(str, Enum):
    LLAMA2_CHAT = "llama2_chat"
    FLAN_UL2 = "flan_ul2"


_ASSETS = {
    TemplateId.LLAMA2_CHAT: "llama2_chat_v1.txt",
    TemplateId.FLAN_UL2: "flan_ul2_v1.txt",
}


@dataclass(frozen=True)
class PromptTemplate:
    template_id: TemplateId
    text: str

    def __post_init__(self) -> None:
        for slot in ("{entity}", "{text}"):
            if self.text.count(slot) != 1:
                raise ConfigError(
                    f"template {self.template_id.value} must contain {slot} exactly once"
                )

    def render(self, entity: str, text: str) -> str:
        return self.text.format(entity=entity, text=text)


def load_template(template_id: TemplateId | str) -> PromptTemplate:
    template_id = TemplateId(template_id)
    path = resources.files("salience.zeroshot") / "assets" / _ASSETS[template_id]
    return PromptTemplate(template_id=template_id, text=path.read_text(encoding="utf-8"))


@dataclass(frozen=True)
class GenerationParams:
    """Greedy single-token generation; frozen for reproducible labeling runs."""

    top_k: int = 0
    top_p: float = 0.0
    temperature: float = 0.0
    max_new_tokens: int = 1

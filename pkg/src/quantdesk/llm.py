"""Optional chat-completion backend for the decision stage.

The transport is any object with ``complete(messages) -> str``; a thin
OpenAI-style HTTP client is provided. Responses must carry the structured
decision JSON; malformed replies are retried and finally fall back to the
rule-based policy so a benchmark run can never abort on model output.
"""

from __future__ import annotations

import json
import os
import re
from dataclasses import dataclass, field
from importlib import resources
from typing import Protocol

import httpx

from .decision import (
    R_MAX,
    R_MIN,
    Direction,
    SignalState,
    TradeDecision,
    decide_rule_based,
    DEFAULT_WEIGHTS,
)

__all__ = [
    "LlmError",
    "LlmTransportError",
    "LlmConfig",
    "ChatCompletionClient",
    "load_template",
    "render_template",
    "build_decision_messages",
    "parse_decision_payload",
    "decide_llm",
]

ENDPOINT_ENV = "QUANTDESK_LLM_ENDPOINT"
MODEL_ENV = "QUANTDESK_LLM_MODEL"
API_KEY_ENV = "QUANTDESK_LLM_API_KEY"


class LlmError(RuntimeError):
    """Raised when a response cannot be turned into a decision."""


class LlmTransportError(RuntimeError):
    """Raised when the chat endpoint itself fails."""


class Transport(Protocol):
    def complete(self, messages: list[dict]) -> str: ...


@dataclass(frozen=True)
class LlmConfig:
    endpoint: str
    model: str
    api_key: str | None = field(default=None, repr=False)
    max_retries: int = 2
    timeout: float = 60.0

    @classmethod
    def from_env(cls) -> "LlmConfig | None":
        endpoint = os.environ.get(ENDPOINT_ENV)
        model = os.environ.get(MODEL_ENV)
        if not endpoint or not model:
            return None
        return cls(
            endpoint=endpoint,
            model=model,
            api_key=os.environ.get(API_KEY_ENV),
        )


class ChatCompletionClient:
    """Minimal chat-completions HTTP transport."""

    def __init__(self, config: LlmConfig) -> None:
        self.config = config

    def complete(self, messages: list[dict]) -> str:
        headers = {"Content-Type": "application/json"}
        if self.config.api_key:
            headers["Authorization"] = f"Bearer {self.config.api_key}"
        try:
            response = httpx.post(
                self.config.endpoint,
                json={"model": self.config.model, "messages": messages},
                headers=headers,
                timeout=self.config.timeout,
            )
            response.raise_for_status()
            body = response.json()
            return body["choices"][0]["message"]["content"]
        except (httpx.HTTPError, KeyError, IndexError, ValueError) as exc:
            raise LlmTransportError(
                f"chat endpoint {self.config.endpoint} failed: {exc}"
            ) from exc


def load_template(name: str) -> str:
    """Read a prompt template shipped with the package."""
    path = resources.files("quantdesk").joinpath("templates", name)
    return path.read_text(encoding="utf-8")


def render_template(text: str, mapping: dict[str, str]) -> str:
    """Substitute ``{{key}}`` placeholders; unknown keys are left intact."""
    for key, value in mapping.items():
        text = text.replace("{{" + key + "}}", value)
    return text


def build_decision_messages(
    state: SignalState, symbol: str, timeframe: str
) -> list[dict]:
    prompt = render_template(
        load_template("decision_prompt.txt"),
        {
            "time_frame": timeframe,
            "stock_name": symbol,
            "indicator_report": state.indicator.to_text(),
            "pattern_report": state.pattern.to_text(),
            "trend_report": state.trend.to_text(),
        },
    )
    return [{"role": "user", "content": prompt}]


_JSON_BLOCK = re.compile(r"\{.*\}", re.DOTALL)


def parse_decision_payload(text: str) -> tuple[Direction, float, str, bool]:
    """Extract (direction, ratio, justification, clamped) from a reply.

    Raises LlmError on anything that is not a valid LONG/SHORT payload with
    a readable risk_reward_ratio.
    """
    block = _JSON_BLOCK.search(text)
    if not block:
        raise LlmError("no JSON object in response")
    try:
        payload = json.loads(block.group(0))
    except json.JSONDecodeError as exc:
        raise LlmError(f"unparsable JSON in response: {exc}") from exc
    raw_decision = str(payload.get("decision", "")).strip().upper()
    if raw_decision not in (Direction.LONG.value, Direction.SHORT.value):
        raise LlmError(f"invalid decision {raw_decision!r}")
    try:
        ratio = float(payload.get("risk_reward_ratio"))
    except (TypeError, ValueError) as exc:
        raise LlmError("missing or non-numeric risk_reward_ratio") from exc
    clamped = not (R_MIN <= ratio <= R_MAX)
    ratio = min(R_MAX, max(R_MIN, ratio))
    justification = str(payload.get("justification", "")).strip()
    return Direction(raw_decision), ratio, justification, clamped


def decide_llm(
    state: SignalState,
    symbol: str,
    timeframe: str,
    transport: Transport,
    max_retries: int = 2,
    fallback_weights: tuple[float, float, float] = DEFAULT_WEIGHTS,
) -> TradeDecision:
    """Ask the chat backend for the decision; fall back to rules if it
    cannot produce a valid one within the retry budget.

    Transport failures propagate (the caller decides whether to degrade);
    malformed payloads never do.
    """
    messages = build_decision_messages(state, symbol, timeframe)
    last_error: LlmError | None = None
    for _ in range(max_retries + 1):
        try:
            reply = transport.complete(messages)
        except LlmTransportError:
            raise
        except Exception as exc:  # noqa: BLE001 - transport contract unknown
            raise LlmTransportError(f"transport raised: {exc}") from exc
        try:
            direction, ratio, justification, clamped = parse_decision_payload(
                reply
            )
        except LlmError as exc:
            last_error = exc
            continue
        if clamped:
            justification = (
                f"{justification} [risk_reward_ratio clamped into "
                f"[{R_MIN}, {R_MAX}]]"
            )
        return TradeDecision(
            direction=direction,
            risk_reward_ratio=ratio,
            justification=justification or "model-provided decision",
            confidence=state.agreement / 3.0,
        )
    fallback = decide_rule_based(state, fallback_weights)
    return TradeDecision(
        direction=fallback.direction,
        risk_reward_ratio=fallback.risk_reward_ratio,
        justification=(
            f"rule-based fallback after invalid model output "
            f"({last_error}); {fallback.justification}"
        ),
        confidence=fallback.confidence,
    )

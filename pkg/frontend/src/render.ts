import { retryVisible, type AttemptView } from "./session.js";
import type { Segment, Verdict } from "./types.js";

export function escapeHtml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

/**
 * Highlighted response HTML. Styles come solely from the server's segments
 * (effort renders blue, outcome yellow via CSS); plain text is left bare so
 * long responses wrap without touching highlight boundaries.
 */
export function renderSegments(segments: readonly Segment[]): string {
  return segments
    .map((segment) =>
      segment.style === "plain"
        ? escapeHtml(segment.text)
        : `<mark class="hl-${segment.style}">${escapeHtml(segment.text)}</mark>`,
    )
    .join("");
}

const VERDICT_LABELS: Record<Verdict, string> = {
  EffortPraised: "Effort praised",
  OutcomeOnly: "Outcome only",
  NoPraiseFound: "No praise found",
};

const VERDICT_BADGES: Record<Verdict, string> = {
  EffortPraised: "badge-effort",
  OutcomeOnly: "badge-outcome",
  NoPraiseFound: "badge-none",
};

export function verdictLabel(verdict: Verdict): string {
  return VERDICT_LABELS[verdict];
}

export function verdictBadgeClass(verdict: Verdict): string {
  return VERDICT_BADGES[verdict];
}

export function renderBadge(verdict: Verdict): string {
  return `<span class="badge ${verdictBadgeClass(verdict)}">${escapeHtml(verdictLabel(verdict))}</span>`;
}

/** One entry of the session list: number, badge, highlights, feedback. */
export function renderAttempt(view: AttemptView): string {
  const retry = retryVisible(view.verdict)
    ? '<button type="button" class="retry" data-action="retry">Try responding again</button>'
    : "";
  return [
    `<article class="attempt" data-attempt="${view.attemptNumber}">`,
    `<header>Attempt ${view.attemptNumber} ${renderBadge(view.verdict)}</header>`,
    `<p class="highlighted">${renderSegments(view.segments)}</p>`,
    `<p class="feedback">${escapeHtml(view.feedbackBody)}</p>`,
    retry,
    "</article>",
  ].join("\n");
}

export function renderSession(entries: readonly AttemptView[]): string {
  return entries.map(renderAttempt).join("\n");
}

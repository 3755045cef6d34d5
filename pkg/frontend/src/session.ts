import type { HighlightPayload, Segment, Verdict } from "./types.js";

/** One submitted attempt with everything the trainee sees for it. */
export interface AttemptView {
  attemptNumber: number;
  inputText: string;
  segments: Segment[];
  feedbackBody: string;
  verdict: Verdict;
}

/** The retry affordance shows whenever the attempt is not effort praise yet. */
export function retryVisible(verdict: Verdict): boolean {
  return verdict !== "EffortPraised";
}

/**
 * Append-only log of the attempts in this browser session. Nothing is
 * persisted: a refresh starts an empty session.
 */
export class SessionLog {
  private attempts: AttemptView[] = [];

  get entries(): readonly AttemptView[] {
    return this.attempts;
  }

  /**
   * Record an attempt. The server's segments must concatenate back to the
   * submitted text exactly; the client never re-tokenizes, so a mismatch
   * means the payload belongs to some other text.
   */
  append(inputText: string, payload: HighlightPayload): AttemptView {
    const joined = payload.markup.segments.map((segment) => segment.text).join("");
    if (joined !== inputText) {
      throw new Error(`server segments spell ${JSON.stringify(joined)}, not the submitted text`);
    }
    const view: AttemptView = {
      attemptNumber: this.attempts.length + 1,
      inputText,
      segments: payload.markup.segments,
      feedbackBody: payload.feedback.body,
      verdict: payload.feedback.verdict,
    };
    this.attempts.push(view);
    return view;
  }
}

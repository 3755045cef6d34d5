/** Wire types for the praisekit highlight API. */

export type HighlightStyle = "plain" | "effort" | "outcome";

export type Verdict = "EffortPraised" | "OutcomeOnly" | "NoPraiseFound";

export interface Segment {
  text: string;
  style: HighlightStyle;
}

export interface CitedSpan {
  praise_type: "effort" | "outcome";
  text: string;
}

export interface Feedback {
  verdict: Verdict;
  body: string;
  cited_spans: CitedSpan[];
}

export interface SpanOut {
  praise_type: "effort" | "outcome";
  start: number;
  end: number;
  text: string;
}

export interface HighlightPayload {
  markup: { segments: Segment[] };
  feedback: Feedback;
  spans: SpanOut[];
  model_id: string;
}

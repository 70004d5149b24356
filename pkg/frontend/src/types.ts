/** Shapes of the documents served by the engine. */

export interface LayoutCanvas {
  width: number;
  height: number;
}

export interface CircleGlyph {
  post_id: string;
  n: number;
  x: number;
  y: number;
  r: number;
  color: string;
}

export interface LabelGlyph {
  gram: string;
  kind: string;
  display?: string;
  x: number;
  y: number;
  w: number;
  h: number;
  click_w: number;
  click_h: number;
  font_size: number;
  color: string;
}

export interface PostMeta {
  text: string;
  timestamp: number;
  is_retweet?: boolean;
}

export interface PortraitLayout {
  canvas: LayoutCanvas;
  circles: CircleGlyph[];
  labels: LabelGlyph[];
  links: Record<string, string[]>;
  palette?: Record<string, string>;
  posts?: Record<string, PostMeta>;
}

export interface RecommendedPost {
  id: string;
  author_id: string;
  timestamp: number;
  text: string;
  is_retweet: boolean;
}

export interface Recommendation {
  post: RecommendedPost;
  relevance: number;
  gap: number;
  combined: number;
  matched_topics: string[];
}

export type Mode = "organic" | "baseline";

export type EventKind =
  | "topic_click"
  | "circle_click"
  | "balloon_open"
  | "balloon_close"
  | "recommendation_shown"
  | "recommendation_clicked";

export type EventPayload = { gram: string } | { post_id: string };

/** A (gram, post_id) pair with a curve currently on screen. */
export type CurvePair = readonly [string, string];

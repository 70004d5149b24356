/** Interactive portrait scenes.
 *
 * Organic mode: the wordcloud labels ring a floret field of post circles;
 * clicking a topic draws bezier curves to its posts, clicking a circle opens
 * a speech balloon (post text, native-style action affordances, injected
 * related posts) and draws curves to the post's topics. Closing the balloon
 * keeps the curves; clicking empty canvas clears them.
 *
 * Baseline mode: the same wordcloud plus two conventional scrollable lists
 * (own posts and recommendations), consuming the identical layout and
 * recommendation payloads.
 */

import { ApiClient } from "./api";
import { balloonPosition, bezierPath, labelEdgePoint } from "./geometry";
import { LayoutSchemaError, validateLayout } from "./schema";
import type {
  CircleGlyph,
  CurvePair,
  LabelGlyph,
  Mode,
  PortraitLayout,
  Recommendation,
} from "./types";

const SVG_NS = "http://www.w3.org/2000/svg";

function svgEl<K extends keyof SVGElementTagNameMap>(
  tag: K,
  attrs: Record<string, string | number> = {},
): SVGElementTagNameMap[K] {
  const el = document.createElementNS(SVG_NS, tag);
  for (const [key, value] of Object.entries(attrs)) {
    el.setAttribute(key, String(value));
  }
  return el;
}

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

export interface SceneState {
  selectedTopic: string | null;
  openPost: string | null;
  drawnCurves: CurvePair[];
  mode: Mode;
}

export class PortraitScene {
  readonly state: SceneState = {
    selectedTopic: null,
    openPost: null,
    drawnCurves: [],
    mode: "organic",
  };

  private readonly labelByGram = new Map<string, LabelGlyph>();
  private readonly circleByPost = new Map<string, CircleGlyph>();
  private readonly labelNodes = new Map<string, SVGGElement>();
  private wrap!: HTMLDivElement;
  private curveLayer!: SVGGElement;
  private balloon: HTMLDivElement | null = null;

  constructor(
    private readonly root: HTMLElement,
    private readonly layout: PortraitLayout,
    private readonly api: ApiClient,
  ) {
    for (const label of layout.labels) this.labelByGram.set(label.gram, label);
    for (const circle of layout.circles) this.circleByPost.set(circle.post_id, circle);
  }

  mount(): void {
    const { width, height } = this.layout.canvas;
    this.wrap = el("div", "portrait-wrap");
    this.wrap.style.position = "relative";
    this.wrap.style.width = `${width}px`;
    this.wrap.style.height = `${height}px`;

    const svg = svgEl("svg", { width, height, viewBox: `0 0 ${width} ${height}` });
    svg.classList.add("portrait-svg");

    const bg = svgEl("rect", { x: 0, y: 0, width, height, fill: "transparent" });
    bg.classList.add("canvas-bg");
    bg.addEventListener("click", () => this.backgroundClick());
    svg.appendChild(bg);

    this.curveLayer = svgEl("g");
    this.curveLayer.classList.add("curve-layer");
    svg.appendChild(this.curveLayer);

    const circleLayer = svgEl("g");
    circleLayer.classList.add("circle-layer");
    for (const circle of this.layout.circles) {
      const node = svgEl("circle", {
        cx: circle.x,
        cy: circle.y,
        r: circle.r,
        fill: circle.color,
      });
      node.classList.add("post-circle");
      node.dataset.postId = circle.post_id;
      node.addEventListener("click", (ev) => {
        ev.stopPropagation();
        void this.circleClick(circle.post_id);
      });
      circleLayer.appendChild(node);
    }
    svg.appendChild(circleLayer);

    const labelLayer = svgEl("g");
    labelLayer.classList.add("label-layer");
    for (const label of this.layout.labels) {
      labelLayer.appendChild(this.buildLabel(label));
    }
    svg.appendChild(labelLayer);

    this.wrap.appendChild(svg);
    this.root.appendChild(this.wrap);
  }

  private buildLabel(label: LabelGlyph): SVGGElement {
    const group = svgEl("g");
    group.classList.add("topic-label");
    group.dataset.gram = label.gram;

    const bgRect = svgEl("rect", {
      x: label.x - label.w / 2,
      y: label.y - label.h / 2,
      width: label.w,
      height: label.h,
      rx: 4,
    });
    bgRect.classList.add("label-bg");
    group.appendChild(bgRect);

    const text = svgEl("text", {
      x: label.x,
      y: label.y,
      "font-size": label.font_size,
      fill: label.color,
      "text-anchor": "middle",
      "dominant-baseline": "central",
    });
    text.classList.add("label-text");
    text.textContent = label.display ?? label.gram;
    group.appendChild(text);

    // the oversized invisible box is the actual click target
    const clickBox = svgEl("rect", {
      x: label.x - label.click_w / 2,
      y: label.y - label.click_h / 2,
      width: label.click_w,
      height: label.click_h,
      fill: "transparent",
    });
    clickBox.classList.add("click-box");
    clickBox.addEventListener("click", (ev) => {
      ev.stopPropagation();
      this.topicClick(label.gram);
    });
    group.appendChild(clickBox);

    this.labelNodes.set(label.gram, group);
    return group;
  }

  /** Highlight the topic and draw one curve per linked post; curves of the
   * previously selected topic are discarded. */
  topicClick(gram: string): void {
    if (!this.labelByGram.has(gram)) return;
    void this.api.emitEvent("topic_click", { gram });
    this.setSelectedTopic(gram);
    const pairs: CurvePair[] = (this.layout.links[gram] ?? [])
      .filter((postId) => this.circleByPost.has(postId))
      .map((postId) => [gram, postId] as const);
    this.drawCurves(pairs);
  }

  /** Open the speech balloon for a post, drawing curves to its topics and
   * fetching related recommendations. Resolves when the balloon is fully
   * rendered (recommendations loaded or the retry affordance shown). */
  async circleClick(postId: string): Promise<void> {
    const circle = this.circleByPost.get(postId);
    if (!circle) return;
    void this.api.emitEvent("circle_click", { post_id: postId });
    this.setSelectedTopic(null);
    const pairs: CurvePair[] = Object.entries(this.layout.links)
      .filter(([gram, ids]) => ids.includes(postId) && this.labelByGram.has(gram))
      .map(([gram]) => [gram, postId] as const);
    this.drawCurves(pairs);
    this.removeBalloon();
    await this.openBalloon(circle);
  }

  /** Click into empty canvas: discard curves and any open balloon. */
  backgroundClick(): void {
    if (this.state.openPost !== null) {
      void this.api.emitEvent("balloon_close", { post_id: this.state.openPost });
      this.removeBalloon();
    }
    this.setSelectedTopic(null);
    this.drawCurves([]);
  }

  /** The balloon's close button: the balloon goes away, the curves stay. */
  closeBalloon(): void {
    if (this.state.openPost !== null) {
      void this.api.emitEvent("balloon_close", { post_id: this.state.openPost });
    }
    this.removeBalloon();
  }

  private setSelectedTopic(gram: string | null): void {
    this.state.selectedTopic = gram;
    for (const [g, node] of this.labelNodes) {
      node.classList.toggle("selected", g === gram);
    }
  }

  private drawCurves(pairs: CurvePair[]): void {
    this.curveLayer.replaceChildren();
    const drawn: CurvePair[] = [];
    for (const [gram, postId] of pairs) {
      const label = this.labelByGram.get(gram);
      const circle = this.circleByPost.get(postId);
      if (!label || !circle) continue;
      const start = labelEdgePoint(label, circle.x, circle.y);
      const path = svgEl("path", {
        d: bezierPath(start.x, start.y, circle.x, circle.y),
        fill: "none",
      });
      path.classList.add("link-curve");
      path.dataset.gram = gram;
      path.dataset.postId = postId;
      this.curveLayer.appendChild(path);
      drawn.push([gram, postId]);
    }
    this.state.drawnCurves = drawn;
  }

  private removeBalloon(): void {
    this.balloon?.remove();
    this.balloon = null;
    this.state.openPost = null;
  }

  private async openBalloon(circle: CircleGlyph): Promise<void> {
    const meta = this.layout.posts?.[circle.post_id];
    const balloon = el("div", "balloon");
    const width = 300;
    const height = 230;
    const pos = balloonPosition(circle, width, height, this.layout.canvas);
    balloon.style.position = "absolute";
    balloon.style.left = `${pos.x}px`;
    balloon.style.top = `${pos.y}px`;
    balloon.style.width = `${width}px`;
    balloon.classList.toggle("flipped", pos.flipped);

    const header = el("div", "balloon-header");
    const when = meta ? new Date(meta.timestamp * 1000).toISOString().slice(0, 10) : "";
    header.appendChild(el("span", "balloon-date", when));
    const close = el("button", "balloon-close", "×");
    close.addEventListener("click", (ev) => {
      ev.stopPropagation();
      this.closeBalloon();
    });
    header.appendChild(close);
    balloon.appendChild(header);

    balloon.appendChild(el("p", "balloon-text", meta?.text ?? circle.post_id));

    // native-style affordances; deliberately local-only, nothing leaves the page
    const actions = el("div", "balloon-actions");
    for (const name of ["reply", "repost", "favorite"]) {
      const button = el("button", `action action-${name}`, name);
      button.addEventListener("click", (ev) => {
        ev.stopPropagation();
        button.classList.add("flash");
        setTimeout(() => button.classList.remove("flash"), 400);
      });
      actions.appendChild(button);
    }
    balloon.appendChild(actions);

    const related = el("div", "balloon-related");
    balloon.appendChild(related);

    balloon.addEventListener("click", (ev) => ev.stopPropagation());
    this.wrap.appendChild(balloon);
    this.balloon = balloon;
    this.state.openPost = circle.post_id;

    await this.loadRelated(related, circle.post_id);
    void this.api.emitEvent("balloon_open", { post_id: circle.post_id });
  }

  private async loadRelated(container: HTMLElement, postId: string): Promise<void> {
    container.replaceChildren();
    try {
      const recs = await this.api.fetchRecommendations({ postId });
      container.appendChild(el("h4", "related-title", "Related posts"));
      const list = el("ul", "rec-list");
      for (const rec of recs) {
        list.appendChild(this.buildRecItem(rec));
      }
      container.appendChild(list);
    } catch {
      container.appendChild(
        el("p", "rec-error", "Related posts could not be loaded."),
      );
      const retry = el("button", "rec-retry", "retry");
      retry.addEventListener("click", (ev) => {
        ev.stopPropagation();
        void this.loadRelated(container, postId);
      });
      container.appendChild(retry);
    }
  }

  private buildRecItem(rec: Recommendation): HTMLLIElement {
    const item = el("li", "rec-item");
    item.dataset.postId = rec.post.id;
    item.appendChild(el("span", "rec-author", `@${rec.post.author_id}`));
    item.appendChild(el("span", "rec-text", rec.post.text));
    if (rec.matched_topics.length > 0) {
      item.appendChild(el("span", "rec-topics", rec.matched_topics.join(" · ")));
    }
    item.addEventListener("click", (ev) => {
      ev.stopPropagation();
      void this.api.emitEvent("recommendation_clicked", { post_id: rec.post.id });
      item.classList.add("clicked");
    });
    void this.api.emitEvent("recommendation_shown", { post_id: rec.post.id });
    return item;
  }
}

export class BaselineView {
  constructor(
    private readonly root: HTMLElement,
    private readonly layout: PortraitLayout,
    private readonly api: ApiClient,
  ) {}

  /** Wordcloud plus two scrollable lists: the portrayed user's posts and the
   * injected recommendations. */
  async mount(): Promise<void> {
    const container = el("div", "baseline");

    const cloud = el("div", "baseline-cloud");
    for (const label of this.layout.labels) {
      const word = el("span", "cloud-word", label.display ?? label.gram);
      word.dataset.gram = label.gram;
      word.style.fontSize = `${label.font_size}px`;
      word.style.color = label.color;
      word.addEventListener("click", () => {
        void this.api.emitEvent("topic_click", { gram: label.gram });
        for (const other of cloud.querySelectorAll(".cloud-word")) {
          other.classList.toggle("selected", other === word);
        }
      });
      cloud.appendChild(word);
    }
    container.appendChild(cloud);

    const columns = el("div", "baseline-columns");

    const own = el("section", "own-posts");
    own.appendChild(el("h3", undefined, "Your posts"));
    const ownList = el("ul", "post-list");
    const posts = Object.entries(this.layout.posts ?? {}).sort(
      (a, b) => b[1].timestamp - a[1].timestamp,
    );
    for (const [postId, meta] of posts) {
      const item = el("li", "post-item", meta.text);
      item.dataset.postId = postId;
      item.addEventListener("click", () => {
        void this.api.emitEvent("circle_click", { post_id: postId });
        item.classList.toggle("selected");
      });
      ownList.appendChild(item);
    }
    own.appendChild(ownList);
    columns.appendChild(own);

    const recsSection = el("section", "recommendations");
    recsSection.appendChild(el("h3", undefined, "Recommended posts"));
    const recList = el("ul", "rec-list");
    recsSection.appendChild(recList);
    columns.appendChild(recsSection);
    container.appendChild(columns);
    this.root.appendChild(container);

    try {
      const recs = await this.api.fetchRecommendations({});
      for (const rec of recs) {
        const item = el("li", "rec-item");
        item.dataset.postId = rec.post.id;
        item.appendChild(el("span", "rec-author", `@${rec.post.author_id}`));
        item.appendChild(el("span", "rec-text", rec.post.text));
        item.addEventListener("click", () => {
          void this.api.emitEvent("recommendation_clicked", { post_id: rec.post.id });
          item.classList.add("clicked");
        });
        void this.api.emitEvent("recommendation_shown", { post_id: rec.post.id });
        recList.appendChild(item);
      }
    } catch {
      recsSection.appendChild(el("p", "rec-error", "Recommendations unavailable."));
    }
  }
}

/** Validate and render a portrait document; a schema violation produces a
 * visible error panel and no partial scene. Returns the organic scene when
 * that mode was rendered (tests poke at it). */
export async function renderInto(
  root: HTMLElement,
  doc: unknown,
  mode: Mode,
  api: ApiClient,
): Promise<PortraitScene | BaselineView | null> {
  let layout: PortraitLayout;
  try {
    layout = validateLayout(doc);
  } catch (err) {
    const panel = el("div", "error-panel");
    panel.appendChild(el("h2", undefined, "Cannot display this portrait"));
    const message =
      err instanceof LayoutSchemaError ? err.problems.join("; ") : String(err);
    panel.appendChild(el("p", undefined, message));
    root.replaceChildren(panel);
    return null;
  }
  root.replaceChildren();
  if (mode === "baseline") {
    const view = new BaselineView(root, layout, api);
    await view.mount();
    return view;
  }
  const scene = new PortraitScene(root, layout, api);
  scene.mount();
  return scene;
}

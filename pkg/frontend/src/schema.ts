/** Structural validation of the portrait layout document. Rendering refuses
 * to start from a malformed document: the caller shows an error panel
 * instead of a partial scene. */

import type { PortraitLayout } from "./types";

export class LayoutSchemaError extends Error {
  readonly problems: string[];

  constructor(problems: string[]) {
    super(`invalid layout document: ${problems.join("; ")}`);
    this.name = "LayoutSchemaError";
    this.problems = problems;
  }
}

const isNum = (v: unknown): v is number => typeof v === "number" && Number.isFinite(v);
const isStr = (v: unknown): v is string => typeof v === "string";

export function validateLayout(doc: unknown): PortraitLayout {
  const problems: string[] = [];
  if (typeof doc !== "object" || doc === null || Array.isArray(doc)) {
    throw new LayoutSchemaError(["document is not an object"]);
  }
  const d = doc as Record<string, unknown>;

  const canvas = d.canvas as Record<string, unknown> | undefined;
  if (!canvas || !isNum(canvas.width) || !isNum(canvas.height)) {
    problems.push("canvas must have numeric width and height");
  }

  if (!Array.isArray(d.circles)) {
    problems.push("circles must be an array");
  } else {
    d.circles.forEach((c: Record<string, unknown>, i: number) => {
      if (!c || !isStr(c.post_id) || !isNum(c.x) || !isNum(c.y) || !isNum(c.r)) {
        problems.push(`circles[${i}] needs post_id, x, y, r`);
      }
    });
  }

  if (!Array.isArray(d.labels)) {
    problems.push("labels must be an array");
  } else {
    d.labels.forEach((l: Record<string, unknown>, i: number) => {
      if (
        !l ||
        !isStr(l.gram) ||
        !isNum(l.x) ||
        !isNum(l.y) ||
        !isNum(l.w) ||
        !isNum(l.h) ||
        !isNum(l.font_size) ||
        !isStr(l.color)
      ) {
        problems.push(`labels[${i}] needs gram, x, y, w, h, font_size, color`);
      }
    });
  }

  if (typeof d.links !== "object" || d.links === null || Array.isArray(d.links)) {
    problems.push("links must be an object of gram -> post id list");
  } else {
    for (const [gram, ids] of Object.entries(d.links as Record<string, unknown>)) {
      if (!Array.isArray(ids) || ids.some((id) => !isStr(id))) {
        problems.push(`links[${JSON.stringify(gram)}] must be a list of post ids`);
      }
    }
  }

  if (problems.length > 0) {
    throw new LayoutSchemaError(problems);
  }
  return doc as unknown as PortraitLayout;
}

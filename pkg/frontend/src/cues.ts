// Cue rendering: expression/motion labels become emoji badges, so the
// per-intent annotations survive losslessly on screen.

import { CuePayload } from "./protocol.js";

const EXPRESSION_EMOJI: Record<string, string> = {
  neutral: "😐",
  small_smile: "🙂",
  large_smile: "😊",
  concerned: "😟",
};

export function cueBadge(expression: string, motion: string): string {
  const emoji = EXPRESSION_EMOJI[expression] ?? expression;
  return motion === "none" ? emoji : `${emoji} ${motion}`;
}

export interface BadgeSet {
  during: string;
  after: string;
  title: string;
}

export function badgesFor(cue: CuePayload): BadgeSet {
  return {
    during: cueBadge(cue.during.expression, cue.during.motion),
    after: cueBadge(cue.after.expression, cue.after.motion),
    title:
      `${cue.intent}: during ${cue.during.expression}/${cue.during.motion}, ` +
      `after ${cue.after.expression}/${cue.after.motion}`,
  };
}

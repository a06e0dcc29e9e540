"use strict";
// Cue rendering: expression/motion labels become emoji badges, so the
// per-intent annotations survive losslessly on screen.
Object.defineProperty(exports, "__esModule", { value: true });
exports.cueBadge = cueBadge;
exports.badgesFor = badgesFor;
const EXPRESSION_EMOJI = {
    neutral: "😐",
    small_smile: "🙂",
    large_smile: "😊",
    concerned: "😟",
};
function cueBadge(expression, motion) {
    const emoji = EXPRESSION_EMOJI[expression] ?? expression;
    return motion === "none" ? emoji : `${emoji} ${motion}`;
}
function badgesFor(cue) {
    return {
        during: cueBadge(cue.during.expression, cue.during.motion),
        after: cueBadge(cue.after.expression, cue.after.motion),
        title: `${cue.intent}: during ${cue.during.expression}/${cue.during.motion}, ` +
            `after ${cue.after.expression}/${cue.after.motion}`,
    };
}

/**
 * Pure rendering and review-guard logic for the user card.
 *
 * Everything here is DOM-free so it can be unit-tested headlessly: the
 * card renders to an HTML string and the guard is a small state machine
 * deciding when the label buttons unlock (the annotator must scroll the
 * tweet list to the end, or explicitly confirm they reviewed the whole
 * profile) and ensuring exactly one label leaves the card.
 */
import type { Label, TaskView } from "./api.js";

export function escapeHtml(raw: string): string {
  return raw
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;")
    .replace(/'/g, "&#39;");
}

export interface ReviewGuard {
  scrolledToEnd: boolean;
  confirmedReview: boolean;
  submitted: boolean;
}

export function newGuard(): ReviewGuard {
  return { scrolledToEnd: false, confirmedReview: false, submitted: false };
}

/** Label buttons stay locked until the profile was actually reviewed. */
export function canSubmit(guard: ReviewGuard): boolean {
  return !guard.submitted && (guard.scrolledToEnd || guard.confirmedReview);
}

export function markScrolled(guard: ReviewGuard): ReviewGuard {
  return { ...guard, scrolledToEnd: true };
}

export function markConfirmed(guard: ReviewGuard): ReviewGuard {
  return { ...guard, confirmedReview: true };
}

/**
 * Consume the guard's single submission. Returns the label exactly once;
 * any further attempt yields null, making a double-submit impossible on
 * the client side.
 */
export function takeSubmission(guard: ReviewGuard, label: Label): Label | null {
  if (!canSubmit(guard)) {
    return null;
  }
  guard.submitted = true;
  return label;
}

export function renderProfile(profile: Record<string, unknown>): string {
  const rows = Object.entries(profile)
    .map(
      ([key, value]) =>
        `<tr><th>${escapeHtml(key)}</th><td>${escapeHtml(String(value))}</td></tr>`,
    )
    .join("");
  return `<table class="profile">${rows}</table>`;
}

export function renderCard(task: TaskView, progress: { done: number; total: number }): string {
  const card = task.card;
  const tweets = card.tweets
    .map(
      (tweet) =>
        `<li><time>${escapeHtml(tweet.created_at)}</time> ${escapeHtml(tweet.text)}</li>`,
    )
    .join("");
  const tags = card.hashtag_summary
    .map(([tag, count]) => `<span class="tag">#${escapeHtml(tag)} (${count})</span>`)
    .join(" ");
  return `
<section class="user-card" data-user-id="${card.user_id}">
  <div class="progress">task ${progress.done + 1} of ${progress.total || "?"}</div>
  <aside class="guidelines">
    <p class="question">${escapeHtml(task.guidelines.question)}</p>
    <p class="definition">${escapeHtml(task.guidelines.definition)}</p>
  </aside>
  ${renderProfile(card.profile)}
  <div class="hashtags">${tags}</div>
  <ol class="tweets" id="tweet-list">${tweets}</ol>
  <label class="confirm"><input type="checkbox" id="confirm-review"> I reviewed the whole profile</label>
  <div class="labels">
    <button id="label-hateful" disabled>hateful</button>
    <button id="label-not-hateful" disabled>not hateful</button>
  </div>
</section>`;
}

export function renderDone(labeled: number): string {
  return `<section class="done">No tasks remaining. You submitted ${labeled} label${labeled === 1 ? "" : "s"}.</section>`;
}

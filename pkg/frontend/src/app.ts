/**
 * Browser bootstrap: wires the session loop to the DOM.
 *
 * The page asks for an annotator id once (kept only for the session), then
 * walks the queue: render card, unlock the label buttons after the tweet
 * list was scrolled to the bottom or the review checkbox ticked, post the
 * single chosen label, move on. Refreshing the page loses nothing - every
 * submitted label already lives on the server.
 */
import { AnnotationApi, Label, TaskView } from "./api.js";
import {
  canSubmit,
  markConfirmed,
  markScrolled,
  newGuard,
  renderCard,
  renderDone,
  takeSubmission,
} from "./card.js";
import { AnnotationSession } from "./session.js";

function requireElement<T extends HTMLElement>(id: string): T {
  const el = document.getElementById(id);
  if (!el) {
    throw new Error(`missing element #${id}`);
  }
  return el as T;
}

function judgeInDom(root: HTMLElement, task: TaskView, done: number): Promise<Label> {
  return new Promise((resolve) => {
    let guard = newGuard();
    root.innerHTML = renderCard(task, { done, total: 0 });
    const tweetList = requireElement<HTMLOListElement>("tweet-list");
    const confirm = requireElement<HTMLInputElement>("confirm-review");
    const buttons: [string, Label][] = [
      ["label-hateful", "hateful"],
      ["label-not-hateful", "not_hateful"],
    ];

    const refresh = () => {
      const enabled = canSubmit(guard);
      for (const [id] of buttons) {
        requireElement<HTMLButtonElement>(id).disabled = !enabled;
      }
    };

    tweetList.addEventListener("scroll", () => {
      const atEnd = tweetList.scrollTop + tweetList.clientHeight >= tweetList.scrollHeight - 4;
      if (atEnd) {
        guard = markScrolled(guard);
        refresh();
      }
    });
    // a short list has nothing to scroll: count it as reviewed
    if (tweetList.scrollHeight <= tweetList.clientHeight) {
      guard = markScrolled(guard);
    }
    confirm.addEventListener("change", () => {
      if (confirm.checked) {
        guard = markConfirmed(guard);
      }
      refresh();
    });
    for (const [id, label] of buttons) {
      requireElement<HTMLButtonElement>(id).addEventListener("click", () => {
        const submission = takeSubmission(guard, label);
        if (submission !== null) {
          refresh();
          resolve(submission);
        }
      });
    }
    refresh();
  });
}

export async function startApp(): Promise<void> {
  const root = requireElement<HTMLElement>("app");
  const params = new URLSearchParams(window.location.search);
  const annotator = params.get("annotator") || window.prompt("annotator id") || "";
  if (!annotator) {
    root.innerHTML = "<p>An annotator id is required.</p>";
    return;
  }
  const api = new AnnotationApi(window.location.origin);
  let labeled = 0;
  const session = new AnnotationSession(api, annotator, {
    judge: (task) => judgeInDom(root, task, labeled).then((label) => {
      labeled += 1;
      return label;
    }),
  });
  const result = await session.run();
  root.innerHTML = renderDone(result.submitted.size);
}

if (typeof document !== "undefined" && document.getElementById("app")) {
  startApp().catch((error) => {
    const root = document.getElementById("app");
    if (root) {
      root.innerHTML = `<p class="error">Session failed: ${String(error)}</p>`;
    }
  });
}

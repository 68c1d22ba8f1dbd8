/**
 * The annotation loop: fetch next task, render the card, submit exactly
 * one label, repeat until the service reports the queue exhausted.
 *
 * All state of record lives server-side; the session only tracks what it
 * needs to keep its own client-side promises: no duplicate submission for
 * a task, and a record of every task it was handed (so harnesses can
 * verify the at-most-once assignment guarantee end to end). A network
 * failure during submission is retried with the identical label event;
 * the service answers a replay of an already-recorded label with a
 * duplicate rejection, which the session treats as success.
 */
import { AnnotationApi, ApiError, Label, TaskView } from "./api.js";

export interface SessionHooks {
  /** Called with each fetched task; resolves with the judgment. */
  judge: (task: TaskView) => Promise<Label> | Label;
  /** Optional presentation callback, e.g. rendering into the DOM. */
  present?: (task: TaskView) => void;
  /** Backoff between retries, injectable for tests. */
  wait?: (attempt: number) => Promise<void>;
}

export interface SessionResult {
  annotator: string;
  receivedTaskIds: number[];
  submitted: Map<number, Label>;
  retries: number;
}

const MAX_ATTEMPTS = 5;

function defaultWait(attempt: number): Promise<void> {
  return new Promise((resolve) => setTimeout(resolve, Math.min(2000, 100 * 2 ** attempt)));
}

export class AnnotationSession {
  private receivedTaskIds: number[] = [];
  private submitted = new Map<number, Label>();
  private retries = 0;

  constructor(
    private api: AnnotationApi,
    private annotator: string,
    private hooks: SessionHooks,
  ) {}

  /** Run to queue exhaustion; returns the session transcript. */
  async run(): Promise<SessionResult> {
    for (;;) {
      const task = await this.withRetry(() => this.api.nextTask(this.annotator));
      if (task === null) {
        break;
      }
      this.receivedTaskIds.push(task.user_id);
      this.hooks.present?.(task);
      const label = await this.hooks.judge(task);
      await this.submitOnce(task.user_id, label);
    }
    return {
      annotator: this.annotator,
      receivedTaskIds: this.receivedTaskIds,
      submitted: this.submitted,
      retries: this.retries,
    };
  }

  /** Exactly one label per task; replays after a lost response are safe. */
  private async submitOnce(userId: number, label: Label): Promise<void> {
    if (this.submitted.has(userId)) {
      return;
    }
    await this.withRetry(async () => {
      const status = await this.api.submitLabel(userId, this.annotator, label);
      return status; // "duplicate" after a retried replay is success
    });
    this.submitted.set(userId, label);
  }

  private async withRetry<T>(operation: () => Promise<T>): Promise<T> {
    const wait = this.hooks.wait ?? defaultWait;
    let lastError: unknown;
    for (let attempt = 0; attempt < MAX_ATTEMPTS; attempt += 1) {
      try {
        return await operation();
      } catch (error) {
        if (error instanceof ApiError && error.status < 500) {
          throw error; // a definitive rejection, not a transient fault
        }
        lastError = error;
        this.retries += 1;
        await wait(attempt);
      }
    }
    throw lastError;
  }
}

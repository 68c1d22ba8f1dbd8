/**
 * Typed client for the annotation service HTTP API.
 *
 * The service owns all state of record; this module only shapes requests
 * and responses for the five endpoints (POST /tasks, GET /tasks/next,
 * POST /labels, GET /resolutions, GET /export).
 */

export type Label = "hateful" | "not_hateful";

export const LABELS: readonly Label[] = ["hateful", "not_hateful"];

export interface TweetView {
  created_at: string;
  text: string;
  hashtags: string[];
}

export interface UserCard {
  user_id: number;
  profile: Record<string, unknown>;
  tweets: TweetView[];
  hashtag_summary: [string, number][];
}

export interface TaskView {
  user_id: number;
  card: UserCard;
  required_annotations: number;
  labels_so_far: number;
  guidelines: { question: string; definition: string };
}

export interface Resolution {
  user_id: number;
  label: Label;
  votes_for: number;
  votes_against: number;
  n_annotators: number;
}

export interface ResolutionsView {
  resolved: Resolution[];
  open_tasks: number;
  total_tasks: number;
}

export class ApiError extends Error {
  constructor(public status: number, message: string) {
    super(message);
    this.name = "ApiError";
  }
}

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class AnnotationApi {
  constructor(
    private baseUrl: string,
    private fetchImpl: FetchLike = (input, init) => fetch(input, init),
  ) {}

  private url(path: string): string {
    return this.baseUrl.replace(/\/$/, "") + path;
  }

  async createTasks(tasks: { user_id: number; card: unknown }[]): Promise<number> {
    const response = await this.fetchImpl(this.url("/tasks"), {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ tasks }),
    });
    if (!response.ok) {
      throw new ApiError(response.status, await response.text());
    }
    const body = (await response.json()) as { created: number };
    return body.created;
  }

  /** Next open task for the annotator, or null when the queue is exhausted. */
  async nextTask(annotator: string): Promise<TaskView | null> {
    const response = await this.fetchImpl(
      this.url(`/tasks/next?annotator=${encodeURIComponent(annotator)}`),
    );
    if (response.status === 204) {
      return null;
    }
    if (!response.ok) {
      throw new ApiError(response.status, await response.text());
    }
    return (await response.json()) as TaskView;
  }

  /**
   * Submit one label. A 409 means the service already holds this
   * (task, annotator) label - the expected outcome when a lost response is
   * retried - so it is reported as "duplicate" rather than thrown.
   */
  async submitLabel(
    userId: number,
    annotator: string,
    label: Label,
  ): Promise<"open" | "resolved" | "duplicate"> {
    const response = await this.fetchImpl(this.url("/labels"), {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ user_id: userId, annotator, label }),
    });
    if (response.status === 409) {
      return "duplicate";
    }
    if (!response.ok) {
      throw new ApiError(response.status, await response.text());
    }
    const body = (await response.json()) as { status: "open" | "resolved" };
    return body.status;
  }

  async resolutions(): Promise<ResolutionsView> {
    const response = await this.fetchImpl(this.url("/resolutions"));
    if (!response.ok) {
      throw new ApiError(response.status, await response.text());
    }
    return (await response.json()) as ResolutionsView;
  }

  async exportCsv(): Promise<string> {
    const response = await this.fetchImpl(this.url("/export"));
    if (!response.ok) {
      throw new ApiError(response.status, await response.text());
    }
    return await response.text();
  }
}

export function parseExportCsv(text: string): Resolution[] {
  const lines = text.split("\n").filter((line) => line.trim().length > 0);
  if (lines[0] !== "user_id,label,votes_for,votes_against,n_annotators") {
    throw new Error("not a label export file");
  }
  return lines.slice(1).map((line) => {
    const [uid, label, votesFor, votesAgainst, n] = line.split(",");
    if (label !== "hateful" && label !== "not_hateful") {
      throw new Error(`unexpected label in export: ${label}`);
    }
    return {
      user_id: Number(uid),
      label,
      votes_for: Number(votesFor),
      votes_against: Number(votesAgainst),
      n_annotators: Number(n),
    };
  });
}

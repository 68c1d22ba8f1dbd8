/**
 * End-to-end harness: three simulated annotators work a fixture queue
 * against the real annotation service over HTTP.
 */
import { ChildProcess, spawn } from "node:child_process";
import { afterAll, beforeAll, describe, expect, it } from "vitest";

import { AnnotationApi, FetchLike, Label, parseExportCsv } from "../src/api.js";
import { AnnotationSession } from "../src/session.js";

const PORT = 8973;
const BASE = `http://127.0.0.1:${PORT}`;

const SERVE_SCRIPT = `
import uvicorn
from userscope.annotation import AnnotationStore, create_app
uvicorn.run(create_app(AnnotationStore()), host="127.0.0.1", port=${PORT}, log_level="warning")
`;

let service: ChildProcess;

async function waitForService(): Promise<void> {
  for (let attempt = 0; attempt < 100; attempt += 1) {
    try {
      const response = await fetch(`${BASE}/resolutions`);
      if (response.ok) {
        return;
      }
    } catch {
      // not up yet
    }
    await new Promise((resolve) => setTimeout(resolve, 100));
  }
  throw new Error("annotation service did not come up");
}

beforeAll(async () => {
  service = spawn("python3", ["-c", SERVE_SCRIPT], { stdio: "ignore" });
  await waitForService();
}, 20_000);

afterAll(() => {
  service.kill();
});

// scripted ground truth: users 101/103/105 hateful, 102/104 not
const GROUND_TRUTH = new Map<number, Label>([
  [101, "hateful"],
  [102, "not_hateful"],
  [103, "hateful"],
  [104, "not_hateful"],
  [105, "hateful"],
]);

function fixtureCards() {
  return [...GROUND_TRUTH.keys()].map((uid) => ({
    user_id: uid,
    card: {
      user_id: uid,
      profile: { statuses_count: uid },
      tweets: [{ created_at: "2017-01-01T00:00:00+00:00", text: `tweet ${uid}`, hashtags: [] }],
      hashtag_summary: [],
    },
  }));
}

describe("three simulated annotators", () => {
  it("complete the queue, match the script, and never see a task twice", async () => {
    const api = new AnnotationApi(BASE);
    expect(await api.createTasks(fixtureCards())).toBe(5);

    const noWait = () => Promise.resolve();
    const sessions = ["ann-1", "ann-2", "ann-3"].map(
      (name) =>
        new AnnotationSession(new AnnotationApi(BASE), name, {
          judge: (task) => GROUND_TRUTH.get(task.user_id)!,
          wait: noWait,
        }),
    );
    const results = await Promise.all(sessions.map((session) => session.run()));

    for (const result of results) {
      // every annotator labeled the whole queue, each task exactly once
      expect(new Set(result.receivedTaskIds).size).toBe(result.receivedTaskIds.length);
      expect(result.submitted.size).toBe(5);
    }

    const resolutions = await api.resolutions();
    expect(resolutions.open_tasks).toBe(0);
    expect(resolutions.resolved).toHaveLength(5);
    for (const resolution of resolutions.resolved) {
      expect(resolution.label).toBe(GROUND_TRUTH.get(resolution.user_id));
      expect(resolution.n_annotators).toBe(3); // unanimous scripts never escalate
      expect(resolution.votes_for).toBe(3);
    }

    // exported labels equal the scripted ground truth
    const exported = parseExportCsv(await api.exportCsv());
    expect(exported).toHaveLength(5);
    for (const row of exported) {
      expect(row.label).toBe(GROUND_TRUTH.get(row.user_id));
    }
  }, 30_000);

  it("retries a dropped submission idempotently", async () => {
    const api = new AnnotationApi(BASE);
    await api.createTasks([
      {
        user_id: 900,
        card: { user_id: 900, profile: {}, tweets: [], hashtag_summary: [] },
      },
    ]);

    // fetch wrapper that delivers the label but drops the first response
    let dropped = false;
    const flaky: FetchLike = async (input, init) => {
      const response = await fetch(input, init);
      if (!dropped && typeof input === "string" && input.endsWith("/labels")) {
        dropped = true;
        throw new TypeError("network error: connection reset");
      }
      return response;
    };
    const session = new AnnotationSession(new AnnotationApi(BASE, flaky), "flaky-ann", {
      judge: () => "not_hateful",
      wait: () => Promise.resolve(),
    });
    const result = await session.run();

    expect(dropped).toBe(true);
    expect(result.retries).toBeGreaterThan(0);
    expect(result.submitted.get(900)).toBe("not_hateful");
    // exactly one label recorded server-side despite the resubmission
    const task900 = (await api.resolutions()).resolved.find((r) => r.user_id === 900);
    expect(task900).toBeUndefined(); // still open: only one of three labels in
    const exportText = await api.exportCsv();
    expect(exportText).not.toContain("900,");
  }, 30_000);
});

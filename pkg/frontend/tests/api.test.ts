import { describe, expect, it, vi } from "vitest";

import { Api, ApiError } from "../src/api.js";

function fakeFetch(status: number, body: unknown) {
  return vi.fn(async () => ({
    ok: status >= 200 && status < 300,
    status,
    statusText: `status ${status}`,
    json: async () => body,
  })) as unknown as typeof fetch;
}

describe("api client", () => {
  it("posts points with the wire field names", async () => {
    const fetchFn = fakeFetch(200, [
      { n: 0, x: 3, y: 4, role: "prototype", class: "object" },
    ]);
    const api = new Api(fetchFn);
    const points = await api.addPoint("sid", 3, 4, "prototype", "object");
    expect(points).toHaveLength(1);
    const [url, init] = (fetchFn as any).mock.calls[0];
    expect(url).toBe("/api/sessions/sid/points");
    expect(JSON.parse(init.body)).toEqual(
      { x: 3, y: 4, role: "prototype", class_label: "object" });
  });

  it("deletes points by index", async () => {
    const fetchFn = fakeFetch(200, []);
    const api = new Api(fetchFn);
    await api.deletePoint("sid", 2);
    const [url, init] = (fetchFn as any).mock.calls[0];
    expect(url).toBe("/api/sessions/sid/points/2");
    expect(init.method).toBe("DELETE");
  });

  it("returns the job id from a train request", async () => {
    const fetchFn = fakeFetch(202, { job_id: "j42" });
    const api = new Api(fetchFn);
    const { job_id } = await api.train("sid", {
      seed: 1, starts: 2, steps: 3, stepsize: 0.05, fdres: 0.01,
      objective: "a", radius: 1, sort: true, d_first: 5, gain: 20,
      offset: 0, threshold: 0.5, subsample: 2,
    });
    expect(job_id).toBe("j42");
  });

  it("surfaces server error details", async () => {
    const fetchFn = fakeFetch(400, { detail: { field: "x", message: "outside" } });
    const api = new Api(fetchFn);
    await expect(api.addPoint("sid", 99, 0, "prototype", "object"))
      .rejects.toThrowError(ApiError);
    await expect(api.addPoint("sid", 99, 0, "prototype", "object"))
      .rejects.toThrow(/outside/);
  });

  it("builds cache-busted mask urls", () => {
    const api = new Api(fakeFetch(200, {}));
    expect(api.maskUrl("sid", 3)).toBe("/api/sessions/sid/segmentation.png?v=3");
  });

  it("passes landscape query parameters", async () => {
    const fetchFn = fakeFetch(200, { axis1: [], axis2: [], values: [], argmax: [0, 0] });
    const api = new Api(fetchFn);
    await api.landscape("sid", "w0,w1", 0.1);
    const [url] = (fetchFn as any).mock.calls[0];
    expect(url).toContain("/api/sessions/sid/landscape?");
    expect(url).toContain("free=w0%2Cw1");
    expect(url).toContain("res=0.1");
  });
});

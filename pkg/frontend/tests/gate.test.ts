import { afterEach, beforeEach, describe, expect, it, vi } from "vitest";

import { RequestGate, debounce } from "../src/gate.js";

describe("debounce", () => {
  beforeEach(() => vi.useFakeTimers());
  afterEach(() => vi.useRealTimers());

  it("fires once, trailing, with the last arguments", () => {
    const calls: number[] = [];
    const fn = debounce((x: number) => calls.push(x), 100);
    fn(1);
    vi.advanceTimersByTime(50);
    fn(2);
    vi.advanceTimersByTime(50);
    fn(3);
    expect(calls).toEqual([]);
    vi.advanceTimersByTime(100);
    expect(calls).toEqual([3]);
  });

  it("fires again after quiet periods", () => {
    const calls: number[] = [];
    const fn = debounce((x: number) => calls.push(x), 100);
    fn(1);
    vi.advanceTimersByTime(100);
    fn(2);
    vi.advanceTimersByTime(100);
    expect(calls).toEqual([1, 2]);
  });
});

describe("request gate", () => {
  it("keeps at most one request in flight and coalesces to the newest", async () => {
    const sent: string[] = [];
    let release: (value: string) => void = () => {};
    const gate = new RequestGate<string, string>(
      (payload) => {
        sent.push(payload);
        return new Promise((res) => (release = res));
      },
      () => {},
      () => {},
    );
    gate.submit("a");
    gate.submit("b");
    gate.submit("c");
    expect(sent).toEqual(["a"]);
    expect(gate.busy).toBe(true);
    release("done-a");
    await Promise.resolve();
    await Promise.resolve();
    await Promise.resolve();
    expect(sent).toEqual(["a", "c"]); // b was superseded before sending
  });

  it("delivers results and errors to the right hooks", async () => {
    const results: string[] = [];
    const errors: unknown[] = [];
    const gate = new RequestGate<number, string>(
      (n) => (n > 0 ? Promise.resolve(`ok ${n}`) : Promise.reject(new Error("no"))),
      (r) => results.push(r),
      (e) => errors.push(e),
    );
    gate.submit(1);
    await vi.waitFor(() => expect(results).toEqual(["ok 1"]));
    gate.submit(-1);
    await vi.waitFor(() => expect(errors.length).toBe(1));
    expect(gate.busy).toBe(false);
  });

  it("final state matches the final submitted value", async () => {
    const results: number[] = [];
    const gate = new RequestGate<number, number>(
      async (n) => n * 10,
      (r) => results.push(r),
      () => {},
    );
    gate.submit(1);
    gate.submit(2);
    gate.submit(3);
    await vi.waitFor(() => expect(results.at(-1)).toBe(30));
  });
});

// Trailing debounce plus a single-in-flight request gate: while a request
// is out, the newest pending payload waits; intermediate ones are dropped.

export function debounce<A extends unknown[]>(
  fn: (...args: A) => void,
  waitMs: number,
): (...args: A) => void {
  let timer: ReturnType<typeof setTimeout> | undefined;
  return (...args: A) => {
    if (timer !== undefined) clearTimeout(timer);
    timer = setTimeout(() => {
      timer = undefined;
      fn(...args);
    }, waitMs);
  };
}

export class RequestGate<P, R> {
  private inflight = false;
  private pending: P | undefined;

  constructor(
    private readonly send: (payload: P) => Promise<R>,
    private readonly onResult: (result: R) => void,
    private readonly onError: (err: unknown) => void,
  ) {}

  get busy(): boolean {
    return this.inflight;
  }

  submit(payload: P): void {
    if (this.inflight) {
      this.pending = payload; // newest wins
      return;
    }
    this.fire(payload);
  }

  private fire(payload: P): void {
    this.inflight = true;
    this.send(payload)
      .then((result) => this.onResult(result))
      .catch((err) => this.onError(err))
      .finally(() => {
        this.inflight = false;
        if (this.pending !== undefined) {
          const next = this.pending;
          this.pending = undefined;
          this.fire(next);
        }
      });
  }
}

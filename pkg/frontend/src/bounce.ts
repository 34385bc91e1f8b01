// Client-side animation of the served bounce parameters. This is the one
// value the kiosk computes: a pure function of payload fields and the
// animation clock, never of the underlying data.

export function bounceHeight(
  base: number,
  clock: number,
  period: number,
  phase: number,
  ratio: number,
): number {
  return base * (1 + ratio * Math.sin((2 * Math.PI * clock) / period + phase));
}

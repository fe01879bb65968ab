/** Orange shading for truck-factor labels.
 *
 * Within one sibling scope, a strictly lower truck factor always gets a
 * strictly darker shade (higher risk draws the eye); equal values get equal
 * shades, and a degenerate scope (every value identical) sits mid-ramp.
 */

const HUE = 28; // orange
const SATURATION = 90;
const LIGHT_MIN = 30; // darkest shade, lowest truck factor in scope
const LIGHT_MAX = 88;

export function rampPosition(value: number, scope: number[]): number {
  if (scope.length === 0) return 0.5;
  const low = Math.min(...scope);
  const high = Math.max(...scope);
  if (high === low) return 0.5;
  return (value - low) / (high - low);
}

export function lightnessFor(value: number, scope: number[]): number {
  return LIGHT_MIN + rampPosition(value, scope) * (LIGHT_MAX - LIGHT_MIN);
}

export function shadeForTruckFactor(value: number, scope: number[]): string {
  return hslToHex(HUE, SATURATION, lightnessFor(value, scope));
}

export function hslToHex(h: number, s: number, l: number): string {
  const sat = s / 100;
  const light = l / 100;
  const chroma = (1 - Math.abs(2 * light - 1)) * sat;
  const hue = h / 60;
  const x = chroma * (1 - Math.abs((hue % 2) - 1));
  let rgb: [number, number, number];
  if (hue < 1) rgb = [chroma, x, 0];
  else if (hue < 2) rgb = [x, chroma, 0];
  else if (hue < 3) rgb = [0, chroma, x];
  else if (hue < 4) rgb = [0, x, chroma];
  else if (hue < 5) rgb = [x, 0, chroma];
  else rgb = [chroma, 0, x];
  const m = light - chroma / 2;
  const to255 = (channel: number) => Math.round((channel + m) * 255);
  return (
    "#" +
    rgb.map((channel) => to255(channel).toString(16).padStart(2, "0")).join("")
  );
}

/** Perceived luminance of a #rrggbb color (0 dark .. 1 light). */
export function luminanceOf(hex: string): number {
  const r = parseInt(hex.slice(1, 3), 16) / 255;
  const g = parseInt(hex.slice(3, 5), 16) / 255;
  const b = parseInt(hex.slice(5, 7), 16) / 255;
  return 0.2126 * r + 0.7152 * g + 0.0722 * b;
}

/** Readable text color against a ramp shade. */
export function textColorOn(hex: string): string {
  return luminanceOf(hex) < 0.55 ? "#ffffff" : "#3a2000";
}

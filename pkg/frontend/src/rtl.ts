// Direction handling for mixed Arabic/Latin content.

const RTL_RANGES: [number, number][] = [
  [0x0590, 0x05ff], // Hebrew
  [0x0600, 0x06ff], // Arabic
  [0x0750, 0x077f], // Arabic Supplement
  [0x08a0, 0x08ff], // Arabic Extended-A
  [0xfb50, 0xfdff], // Arabic Presentation Forms-A
  [0xfe70, 0xfeff], // Arabic Presentation Forms-B
];

function isRtlChar(ch: string): boolean {
  const code = ch.codePointAt(0) ?? 0;
  return RTL_RANGES.some(([lo, hi]) => code >= lo && code <= hi);
}

/** dir attribute value for a piece of text: "rtl" when RTL characters dominate. */
export function textDirection(text: string): "rtl" | "ltr" {
  let rtl = 0;
  let ltr = 0;
  for (const ch of text) {
    if (isRtlChar(ch)) {
      rtl += 1;
    } else if (/[A-Za-z]/.test(ch)) {
      ltr += 1;
    }
  }
  return rtl >= ltr && rtl > 0 ? "rtl" : "ltr";
}

/** Tiny DOM helpers; no framework. */

export function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  attrs: Record<string, string> = {},
  children: Array<Node | string> = []
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  for (const [name, value] of Object.entries(attrs)) {
    if (name === "class") node.className = value;
    else node.setAttribute(name, value);
  }
  for (const child of children) {
    node.append(child);
  }
  return node;
}

export function clear(node: HTMLElement): void {
  node.innerHTML = "";
}

/** The 17 supported keys, matching the service catalog, plus "random". */
export const KEY_CHOICES = [
  "random",
  "C major", "G major", "D major", "A major", "E major",
  "F major", "Bb major", "Eb major", "Ab major",
  "A minor", "E minor", "B minor", "D minor", "G minor",
  "C minor", "F minor", "F# minor",
];

export function formatStars(rating: number | null): string {
  const filled = rating ?? 0;
  return "★".repeat(filled) + "☆".repeat(5 - filled);
}

/** Interactive 1-5 star row. */
export function starWidget(
  rating: number | null,
  onRate: (stars: number) => void
): HTMLElement {
  const row = el("span", { class: "stars", role: "radiogroup" });
  for (let i = 1; i <= 5; i++) {
    const star = el("button", {
      class: "star" + (rating !== null && i <= rating ? " filled" : ""),
      title: `${i} star${i > 1 ? "s" : ""}`,
      "aria-label": `${i} stars`,
    });
    star.textContent = rating !== null && i <= rating ? "★" : "☆";
    star.addEventListener("click", () => onRate(i));
    row.appendChild(star);
  }
  return row;
}

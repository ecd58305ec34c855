/**
 * The cheat sheet: all 23 sketchable element categories with a tiny picture
 * of what to draw, plus the placeholder / compound-element conventions.
 */

export interface CheatEntry {
  category: string;
  label: string;
  hint: string;
  svg: string;
}

export const CHEAT_ENTRIES: CheatEntry[] = [
  {
    category: "avatar",
    label: "Avatar",
    hint: "head and shoulders",
    svg: `<circle cx="16" cy="10" r="5"/><path d="M5 28a11 9 0 0 1 22 0"/>`,
  },
  {
    category: "back",
    label: "Back",
    hint: "chevron left",
    svg: `<polyline points="20 5 9 16 20 27"/>`,
  },
  {
    category: "camera",
    label: "Camera",
    hint: "body, lens, bump",
    svg: `<rect x="3" y="10" width="26" height="17" rx="2"/><circle cx="16" cy="18.5" r="5"/><path d="M11 10l2-4h6l2 4"/>`,
  },
  {
    category: "cancel",
    label: "Cancel",
    hint: "two crossing lines",
    svg: `<path d="M7 7l18 18M25 7L7 25"/>`,
  },
  {
    category: "checkbox",
    label: "Checkbox",
    hint: "box with a tick",
    svg: `<rect x="4" y="4" width="24" height="24" rx="2"/><polyline points="9 16 14 22 23 10"/>`,
  },
  {
    category: "cloud",
    label: "Cloud",
    hint: "any icon we don't support",
    svg: `<path d="M9 25h14a5 5 0 0 0 0-10 8 8 0 0 0-15.5 2A4.5 4.5 0 0 0 9 25z"/>`,
  },
  {
    category: "drop_down",
    label: "Drop-down",
    hint: "bar with a small arrow",
    svg: `<rect x="3" y="10" width="26" height="12" rx="2"/><polyline points="20 14 23 18 26 14"/>`,
  },
  {
    category: "envelope",
    label: "Envelope",
    hint: "rectangle plus flap",
    svg: `<rect x="3" y="7" width="26" height="18" rx="2"/><polyline points="4 9 16 19 28 9"/>`,
  },
  {
    category: "forward",
    label: "Forward",
    hint: "chevron right",
    svg: `<polyline points="12 5 23 16 12 27"/>`,
  },
  {
    category: "house",
    label: "Home",
    hint: "roof over a body",
    svg: `<polyline points="4 16 16 5 28 16"/><path d="M8 14v13h16V14"/>`,
  },
  {
    category: "jail_window",
    label: "Jail window",
    hint: "stands in for an image",
    svg: `<rect x="5" y="5" width="22" height="22"/><path d="M12.3 5v22M19.7 5v22"/>`,
  },
  {
    category: "left_arrow",
    label: "Left arrow",
    hint: "arrow with a shaft",
    svg: `<path d="M28 16H6M13 9l-7 7 7 7"/>`,
  },
  {
    category: "menu",
    label: "Menu",
    hint: "three bars",
    svg: `<path d="M5 9h22M5 16h22M5 23h22"/>`,
  },
  {
    category: "play",
    label: "Play",
    hint: "triangle pointing right",
    svg: `<polygon points="9 5 27 16 9 27"/>`,
  },
  {
    category: "plus",
    label: "Plus",
    hint: "two crossing bars",
    svg: `<path d="M16 5v22M5 16h22"/>`,
  },
  {
    category: "search",
    label: "Search",
    hint: "lens with a handle",
    svg: `<circle cx="13" cy="13" r="8"/><path d="M19 19l9 9"/>`,
  },
  {
    category: "setting",
    label: "Settings",
    hint: "circle with spokes",
    svg: `<circle cx="16" cy="16" r="6"/><path d="M16 3v5M16 24v5M3 16h5M24 16h5M6.8 6.8l3.5 3.5M21.7 21.7l3.5 3.5M25.2 6.8l-3.5 3.5M10.3 21.7l-3.5 3.5"/>`,
  },
  {
    category: "share",
    label: "Share",
    hint: "three joined dots",
    svg: `<circle cx="7" cy="16" r="4"/><circle cx="25" cy="7" r="4"/><circle cx="25" cy="25" r="4"/><path d="M10.5 14.2l11-5.4M10.5 17.8l11 5.4"/>`,
  },
  {
    category: "slider",
    label: "Slider",
    hint: "line with a knob",
    svg: `<path d="M3 16h26"/><circle cx="13" cy="16" r="5"/>`,
  },
  {
    category: "square",
    label: "Square",
    hint: "card or button frame",
    svg: `<rect x="5" y="7" width="22" height="18" rx="1"/>`,
  },
  {
    category: "squiggle",
    label: "Squiggle",
    hint: "stands in for text",
    svg: `<path d="M3 18q3.5-8 7 0t7 0t7 0t7 0"/>`,
  },
  {
    category: "star",
    label: "Star",
    hint: "five points",
    svg: `<polygon points="16 4 19.5 12.5 28 13 21.5 19 23.5 28 16 23 8.5 28 10.5 19 4 13 12.5 12.5"/>`,
  },
  {
    category: "switch",
    label: "Switch",
    hint: "pill with a knob",
    svg: `<rect x="3" y="9" width="26" height="14" rx="7"/><circle cx="22" cy="16" r="5"/>`,
  },
];

export function renderCheatsheet(): string {
  const entries = CHEAT_ENTRIES.map(
    (e) => `
      <li class="cheat-entry" data-category="${e.category}" title="${e.hint}">
        <svg viewBox="0 0 32 32" fill="none" stroke="currentColor" stroke-width="2.4"
             stroke-linecap="round" stroke-linejoin="round">${e.svg}</svg>
        <span>${e.label}</span>
      </li>`,
  ).join("");
  return `
    <ul class="cheat-grid">${entries}</ul>
    <div class="cheat-note">
      <p><strong>Placeholders:</strong> a squiggle is any text, a jail window is
      any image, a cloud is any icon not listed here.</p>
      <p><strong>Text button:</strong> commit a square, then commit a squiggle
      drawn inside it — the search fuses the pair into one text button.</p>
    </div>`;
}

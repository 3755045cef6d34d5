import { ApiClient, ApiError } from "./api.js";
import { renderAttempt, renderSession } from "./render.js";
import { SessionLog } from "./session.js";

const DEFAULT_BASE_URL = "http://localhost:8000";

function element<T extends HTMLElement>(id: string): T {
  const found = document.getElementById(id);
  if (!found) throw new Error(`missing #${id}`);
  return found as T;
}

const form = element<HTMLFormElement>("attempt-form");
const input = element<HTMLTextAreaElement>("attempt-input");
const submit = element<HTMLButtonElement>("attempt-submit");
const banner = element<HTMLDivElement>("error-banner");
const latest = element<HTMLDivElement>("latest-attempt");
const history = element<HTMLDivElement>("session-history");
const baseUrlInput = element<HTMLInputElement>("base-url");

baseUrlInput.value = localStorage.getItem("praisekit.baseUrl") ?? DEFAULT_BASE_URL;
baseUrlInput.addEventListener("change", () => {
  localStorage.setItem("praisekit.baseUrl", baseUrlInput.value.trim());
});

const session = new SessionLog();
let pending = false;

function showError(message: string): void {
  banner.textContent = message;
  banner.hidden = false;
}

function clearError(): void {
  banner.hidden = true;
  banner.textContent = "";
}

async function submitAttempt(): Promise<void> {
  const text = input.value;
  if (!text.trim()) {
    showError("Write a praise response before submitting.");
    return;
  }
  if (pending) return; // one request in flight per session
  pending = true;
  submit.disabled = true;
  clearError();
  try {
    const client = new ApiClient(baseUrlInput.value.trim() || DEFAULT_BASE_URL);
    const payload = await client.submitHighlight(text);
    const view = session.append(text, payload);
    latest.innerHTML = renderAttempt(view);
    history.innerHTML = renderSession(session.entries);
    input.value = "";
  } catch (error) {
    if (error instanceof ApiError) {
      showError(`The highlight service rejected the attempt (${error.message}).`);
    } else {
      showError(`Unexpected failure: ${String(error)}`);
    }
  } finally {
    pending = false;
    submit.disabled = false;
  }
}

form.addEventListener("submit", (event) => {
  event.preventDefault();
  void submitAttempt();
});

// "Try responding again" puts the cursor back in the box for the next attempt.
document.addEventListener("click", (event) => {
  const target = event.target as HTMLElement | null;
  if (target?.dataset.action === "retry") {
    input.focus();
  }
});

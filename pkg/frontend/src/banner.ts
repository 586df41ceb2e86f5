/** Error banner with retry; survives until dismissed or the retry succeeds. */

export function showErrorBanner(host: HTMLElement, message: string, retry?: () => void): HTMLElement {
  clearErrorBanner(host);
  const banner = document.createElement("div");
  banner.className = "error-banner";
  banner.setAttribute("data-testid", "error-banner");
  banner.setAttribute("role", "alert");

  const text = document.createElement("span");
  text.textContent = message;
  banner.appendChild(text);

  if (retry) {
    const retryButton = document.createElement("button");
    retryButton.textContent = "Retry";
    retryButton.onclick = () => {
      banner.remove();
      retry();
    };
    banner.appendChild(retryButton);
  }

  const dismiss = document.createElement("button");
  dismiss.textContent = "Dismiss";
  dismiss.onclick = () => banner.remove();
  banner.appendChild(dismiss);

  host.prepend(banner);
  return banner;
}

export function clearErrorBanner(host: HTMLElement): void {
  host.querySelectorAll('[data-testid="error-banner"]').forEach((el) => el.remove());
}

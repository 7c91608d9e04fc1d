import { fetchSession } from './api';
import { planAttempted, store } from './store';
import { renderStep1 } from './step1';
import { renderStep2 } from './step2';
import { renderStep3 } from './step3';

const steps = [
  { title: 'Label part functions', render: renderStep1 },
  { title: 'Author the causal model', render: renderStep2 },
  { title: 'Test on a new object', render: renderStep3 },
];

/** Can the user move to the given step yet? Forward-only past completed work. */
export function stepReachable(index: number): boolean {
  const s = store.get();
  if (index <= s.maxCompletedStep + 1) {
    // step 3 additionally needs a stored plan attempt, even a failed one
    if (index === 2) return s.maxCompletedStep >= 1 && planAttempted(s);
    return true;
  }
  return false;
}

async function reloadSession(): Promise<void> {
  const s = store.get();
  if (!s.sessionId) return;
  const doc = await fetchSession(s.sessionId);
  store.set({
    version: doc.version,
    trainingObjectId: doc.step1?.object_id ?? null,
    trainingEntries: doc.step1?.entries ?? {},
    modelSource: doc.step2?.source ?? s.modelSource,
    report: doc.step2?.report ?? null,
    graph: doc.step2?.graph ?? null,
    transferResults: doc.step3.results,
    staleSession: false,
    banner: null,
  });
}

export function renderWizard(root: HTMLElement): void {
  const container = document.createElement('div');
  container.className = 'wizard';

  const bannerHost = document.createElement('div');
  bannerHost.className = 'banner-host';

  const nav = document.createElement('nav');
  nav.className = 'wizard-nav';

  const content = document.createElement('section');
  content.className = 'wizard-content';

  container.appendChild(bannerHost);
  container.appendChild(nav);
  container.appendChild(content);
  root.appendChild(container);

  function syncBanner(): void {
    const s = store.get();
    bannerHost.innerHTML = '';
    if (s.staleSession) {
      const stale = document.createElement('div');
      stale.className = 'banner blocking stale-reload';
      stale.setAttribute('role', 'alert');
      stale.textContent =
        'This session changed elsewhere; reload it before saving again. ';
      const reload = document.createElement('button');
      reload.textContent = 'Reload session';
      reload.addEventListener('click', () => {
        void reloadSession();
      });
      stale.appendChild(reload);
      bannerHost.appendChild(stale);
      return;
    }
    if (s.banner) {
      const el = document.createElement('div');
      el.className = `banner ${s.banner.kind}`;
      if (s.banner.kind === 'blocking') el.setAttribute('role', 'alert');
      el.textContent = s.banner.text;
      bannerHost.appendChild(el);
    }
  }

  function syncNav(): void {
    const s = store.get();
    nav.innerHTML = '';
    steps.forEach((step, index) => {
      const button = document.createElement('button');
      button.textContent = `${index + 1}. ${step.title}`;
      button.disabled = !stepReachable(index);
      if (index === s.stepIndex) button.classList.add('active');
      button.addEventListener('click', () => {
        if (stepReachable(index)) store.set({ stepIndex: index });
      });
      nav.appendChild(button);
    });
  }

  let renderedStep = -1;

  function sync(): void {
    const s = store.get();
    syncBanner();
    syncNav();
    if (s.stepIndex !== renderedStep) {
      renderedStep = s.stepIndex;
      content.innerHTML = '';
      steps[s.stepIndex].render(content);
    }
  }

  sync();
  store.subscribe(sync);
}
